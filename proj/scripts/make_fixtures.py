#!/usr/bin/env python3
# Copyright 2026 The spokendst Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic test fixtures under tests/fixtures/.

Output is fully determined by the fixed seed, so re-running is a no-op.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
rng = random.Random(20231015)

AREAS = ["centre", "north", "south", "east", "west"]
PRICES = ["cheap", "moderate", "expensive"]
DAYS = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"]
RESTAURANTS = ["golden wok", "pizza hut city centre", "the copper kettle", "curry garden",
               "la mimosa", "the river bar steakhouse", "nandos", "bedouin", "yu garden"]
HOTELS = ["acorn guest house", "the lensfield hotel", "alexander bed and breakfast",
          "gonville hotel", "huntingdon marriott hotel", "avalon", "cityroomz"]
PLACES = ["stevenage", "london kings cross", "cambridge", "ely", "peterborough", "norwich",
          "museum of archaelogy and anthropology", "kings college", "the junction", "broxbourne"]
FOODS = ["chinese", "italian", "indian", "british", "european", "thai", "korean"]
TIMES = ["09:15", "10:30", "11:45", "12:00", "13:30", "15:30", "17:15", "18:45", "20:00"]

# Plausible ASR-style confusions for names.
CONFUSIONS = {
    "golden wok": "gordon wok", "stevenage": "stevanase", "cambridge": "cambrich",
    "la mimosa": "la mimoza", "bedouin": "bedwin", "nandos": "nandoz",
    "avalon": "avalen", "ely": "eli", "norwich": "norrich", "cityroomz": "city rooms",
    "yu garden": "you garden", "the junction": "the junktion",
}


def turn_states():
    domain = rng.choice(["restaurant", "hotel", "train", "taxi"])
    turns = []
    if domain == "restaurant":
        turns.append({"restaurant-food": rng.choice(FOODS), "restaurant-area": rng.choice(AREAS)})
        turns.append({"restaurant-pricerange": rng.choice(PRICES)})
        turns.append({"restaurant-name": rng.choice(RESTAURANTS)})
        turns.append({"restaurant-bookpeople": str(rng.randint(1, 8)),
                      "restaurant-bookday": rng.choice(DAYS),
                      "restaurant-booktime": rng.choice(TIMES)})
    elif domain == "hotel":
        turns.append({"hotel-area": rng.choice(AREAS), "hotel-type": rng.choice(["hotel", "guesthouse"])})
        turns.append({"hotel-stars": str(rng.randint(2, 5)), "hotel-parking": rng.choice(["yes", "no"])})
        turns.append({"hotel-name": rng.choice(HOTELS)})
        turns.append({"hotel-bookstay": str(rng.randint(1, 5)), "hotel-bookday": rng.choice(DAYS)})
    elif domain == "train":
        turns.append({"train-departure": rng.choice(PLACES), "train-destination": rng.choice(PLACES)})
        turns.append({"train-day": rng.choice(DAYS)})
        turns.append({"train-leaveat": rng.choice(TIMES)})
        turns.append({"train-bookpeople": str(rng.randint(1, 6))})
    else:
        turns.append({"taxi-departure": rng.choice(PLACES + RESTAURANTS)})
        turns.append({"taxi-destination": rng.choice(PLACES + HOTELS)})
        turns.append({"taxi-arriveby": rng.choice(TIMES)})
    n = rng.randint(2, len(turns))
    states = turns[:n]
    # Occasionally the user corrects an earlier value.
    if rng.random() < 0.2:
        k, v = next(iter(states[0].items()))
        if k.endswith("-area"):
            states.append({k: rng.choice([a for a in AREAS if a != v])})
    return states


def utterance(state):
    parts = [f"{k.split('-')[1]} {v}" for k, v in state.items()]
    return "i would like " + " and ".join(parts)


def corrupt_value(v):
    if v in CONFUSIONS and rng.random() < 0.6:
        return CONFUSIONS[v]
    if v.isdigit():
        return str(int(v) + 1)
    if v in AREAS:
        return rng.choice([a for a in AREAS if a != v])
    if v in DAYS:
        return rng.choice([d for d in DAYS if d != v])
    if ":" in v:
        return rng.choice([t for t in TIMES if t != v])
    return v + "s"


def asr(text):
    words = text.split()
    out = []
    for w in words:
        r = rng.random()
        if r < 0.05:
            continue
        if r < 0.10:
            out.append(w[:-1] if len(w) > 2 else w)
            continue
        out.append(w)
        if r > 0.97:
            out.append("uh")
    return " ".join(out)


def make_corpus(n_dialogues):
    gold, preds = [], []
    for d in range(n_dialogues):
        did = f"MUL{d:04d}.json"
        states = turn_states()
        turns = []
        for t, st in enumerate(states, start=1):
            user = utterance(st)
            turns.append({"turn": t, "system": "" if t == 1 else "how can i help",
                          "user": user, "state": st})
            pst = {}
            for k, v in st.items():
                r = rng.random()
                if r < 0.12:
                    continue                     # missed slot
                pst[k] = corrupt_value(v) if r < 0.30 else v
            if rng.random() < 0.08:
                pst["attraction-area"] = rng.choice(AREAS)   # spurious slot
            rec = {"dialogue_id": did, "turn": t, "state": pst, "asr_hypothesis": asr(user)}
            if rng.random() < 0.9:
                preds.append(rec)
        gold.append({"dialogue_id": did, "turns": turns})
    rng.shuffle(preds)
    return {"dialogues": gold}, preds


def transcripts(n):
    templates = [
        "I need a taxi to {place} by {time}",
        "the postcode is {code} and the phone is {phone}",
        "book a table for {n} people at {time} on {day}",
        "the entrance fee is ${money} per person",
        "it costs £{money} for the night",
        "fish & chips @ the {place} please",
        "I the am looking for a {price} resturant in the {area}",
        "your reference number is {code} .",
        "there are {n} trains leaving after {time}",
        "I need a guesthous with {n} stars and free wifi",
        "we have #{n} on the list, about {pct}% full",
        "is there anything in the {area} of town?",
        "the train arrives at {time} and costs {money} pounds",
        "a need i a hotel for {n} nights",
        "Thank you, goodbye.",
    ]
    lines = []
    for _ in range(n):
        tpl = rng.choice(templates)
        code = "".join(rng.choice("abcdefghjkmnpqrstuvwxyz0123456789") for _ in range(rng.choice([6, 8])))
        if not any(c.isdigit() for c in code):
            code = code[:-1] + "7"
        if not any(c.isalpha() for c in code):
            code = "c" + code[1:]
        lines.append(tpl.format(place=rng.choice(PLACES), time=rng.choice(TIMES), code=code,
                                phone="01223" + "".join(rng.choice("0123456789") for _ in range(6)),
                                n=rng.randint(1, 12), day=rng.choice(DAYS), money=rng.randint(1, 250),
                                price=rng.choice(PRICES), area=rng.choice(AREAS), pct=rng.randint(1, 99)))
    return lines


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    gold, preds = make_corpus(40)
    (OUT / "corpus_gold.json").write_text(json.dumps(gold, indent=2) + "\n")
    (OUT / "corpus_pred.jsonl").write_text("".join(json.dumps(p, sort_keys=True) + "\n" for p in preds))
    (OUT / "transcripts_200.txt").write_text("\n".join(transcripts(200)) + "\n")

    # The two worked examples of the metric comparison table, one turn each.
    worked_gold = {"dialogues": [
        {"dialogue_id": "row1", "turns": [{"turn": 1, "system": "",
         "user": "I want the taxi to depart from Stevanage to museum for 1 person.",
         "state": {"taxi-departure": "Stevanage", "taxi-destination": "museum", "taxi-bookpeople": "1"}}]},
        {"dialogue_id": "row2", "turns": [{"turn": 1, "system": "",
         "user": "The restaurant I would reserve is Golden Wok .",
         "state": {"restaurant-name": "Golden Wok"}}]},
    ]}
    worked_pred = [
        {"dialogue_id": "row1", "turn": 1, "state": {"taxi-departure": "Stevanase", "taxi-destination": "museum"}},
        {"dialogue_id": "row2", "turn": 1, "state": {"restaurant-name": "Gordon Wok"}},
    ]
    (OUT / "worked_gold.json").write_text(json.dumps(worked_gold, indent=2) + "\n")
    (OUT / "worked_pred.jsonl").write_text("".join(json.dumps(p) + "\n" for p in worked_pred))


if __name__ == "__main__":
    main()
