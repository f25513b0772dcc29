"""Seeded random finite-category generator for property tests.

Categories come from constructions that are associative by design:
finite posets (at most one arrow between objects), a small catalog of
monoids, and disjoint unions of those. Everything still goes through
validate_category, so the laws are re-checked rather than assumed.
"""
from __future__ import annotations

import random

from finsite import FinCategory, validate_category
from finsite.topology import all_sieves, sieve

# monoid catalog: element "1" is the identity; tables give "x then y"
MONOID_TABLES = {
    "c2": {("s", "s"): "1"},
    "c3": {("r", "r"): "rr", ("r", "rr"): "1", ("rr", "r"): "1", ("rr", "rr"): "r"},
    "idem": {("e", "e"): "e"},
    # "f then g = g": composition forgets the first factor, which kills
    # the right Ore condition (a cospan p, q can never commute)
    "leftzero": {
        ("p", "p"): "p", ("p", "q"): "q", ("q", "p"): "p", ("q", "q"): "q",
    },
}


def poset_raw(objects: list[str], le: set[tuple[str, str]]) -> dict:
    """Category of a poset: one arrow x->y per strict relation x<y."""
    name = {pair: f"{pair[0]}_{pair[1]}" for pair in le}
    arrows = [{"id": name[(x, y)], "dom": x, "cod": y} for (x, y) in sorted(le)]
    compose = []
    for (x, y) in sorted(le):
        for (y2, z) in sorted(le):
            if y2 != y:
                continue
            compose.append({
                "first": name[(x, y)],
                "then": name[(y, z)],
                "equals": name[(x, z)],
            })
    return {"objects": objects, "arrows": arrows, "compose": compose}


def random_poset_raw(rng: random.Random, max_objects: int = 4) -> dict:
    n = rng.randint(1, max_objects)
    objects = [f"p{i}" for i in range(n)]
    le: set[tuple[str, str]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                le.add((objects[i], objects[j]))
    # transitive closure (indices are already topologically ordered)
    changed = True
    while changed:
        changed = False
        for (x, y) in list(le):
            for (y2, z) in list(le):
                if y2 == y and (x, z) not in le:
                    le.add((x, z))
                    changed = True
    return poset_raw(objects, le)


def monoid_raw(kind: str, obj: str = "m") -> dict:
    table = MONOID_TABLES[kind]
    elements = sorted({x for pair in table for x in pair})
    arrows = [{"id": e, "dom": obj, "cod": obj} for e in elements]
    compose = [
        {"first": f, "then": g, "equals": h if h != "1" else f"id:{obj}"}
        for (f, g), h in sorted(table.items())
    ]
    return {"objects": [obj], "arrows": arrows, "compose": compose}


def disjoint_union_raw(raw1: dict, raw2: dict) -> dict:
    def tag(raw: dict, prefix: str) -> dict:
        ren_obj = {o: f"{prefix}{o}" for o in raw["objects"]}
        ren_arr = {a["id"]: f"{prefix}{a['id']}" for a in raw["arrows"]}

        def ren_eq(h: str) -> str:
            if h.startswith("id:"):
                return "id:" + ren_obj[h[3:]]
            return ren_arr[h]

        return {
            "objects": [ren_obj[o] for o in raw["objects"]],
            "arrows": [
                {"id": ren_arr[a["id"]], "dom": ren_obj[a["dom"]], "cod": ren_obj[a["cod"]]}
                for a in raw["arrows"]
            ],
            "compose": [
                {"first": ren_arr[e["first"]], "then": ren_arr[e["then"]], "equals": ren_eq(e["equals"])}
                for e in raw["compose"]
            ],
        }

    left, right = tag(raw1, "L"), tag(raw2, "R")
    return {
        "objects": left["objects"] + right["objects"],
        "arrows": left["arrows"] + right["arrows"],
        "compose": left["compose"] + right["compose"],
    }


def random_category(
    rng: random.Random,
    max_objects: int = 4,
    max_arrows: int = 10,
) -> FinCategory:
    """A random valid category within the given object/arrow budget."""
    while True:
        kind = rng.choice(["poset", "poset", "monoid", "union"])
        if kind == "poset":
            raw = random_poset_raw(rng, max_objects)
        elif kind == "monoid":
            raw = monoid_raw(rng.choice(sorted(MONOID_TABLES)))
        else:
            small1 = random_poset_raw(rng, max(1, max_objects - 2))
            small2 = monoid_raw(rng.choice(["c2", "idem"])) if rng.random() < 0.5 else random_poset_raw(rng, 2)
            raw = disjoint_union_raw(small1, small2)
        C = validate_category(raw)
        if len(C.objects) <= max_objects and len(C.arrows) <= max_arrows:
            return C


def random_sieve_axioms(rng: random.Random, C: FinCategory, max_axioms: int = 3):
    pool = [S for c in C.objects for S in all_sieves(C, c)]
    count = rng.randint(0, min(max_axioms, len(pool)))
    return tuple(rng.sample(pool, count))
