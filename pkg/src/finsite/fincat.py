"""Finite categories with explicit composition tables.

Objects and arrows are string ids. Identities are auto-inserted under the
reserved ids ``id:<object>``; user-supplied arrows may not use that prefix.
Validation is exhaustive (totality, associativity, identity laws), which is
the simplest correct choice at desk scale. All values are immutable after
validation and every operation is a pure function.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import (
    AssociativityViolation,
    DanglingEndpoint,
    FormatError,
    IdentityViolation,
    MissingComposite,
)

ID_PREFIX = "id:"


def identity_id(obj: str) -> str:
    return ID_PREFIX + obj


class SiteProperty(Enum):
    RIGHT_ORE = "right-ore"
    AMALGAMATION = "amalgamation"
    JOINT_EMBEDDING = "joint-embedding"


class FinCategory:
    """A validated finite category.

    ``arrows`` maps arrow id to ``(dom, cod)`` and includes identities;
    ``compose`` is total on composable pairs ``(f, g)`` read as "f then g"
    (the categorical composite g∘f).
    """

    __slots__ = ("objects", "arrows", "compose", "identities", "_into", "_out", "_key")

    def __init__(
        self,
        objects: Iterable[str],
        arrows: Mapping[str, tuple[str, str]],
        compose: Mapping[tuple[str, str], str],
        identities: Mapping[str, str],
    ):
        self.objects: tuple[str, ...] = tuple(sorted(objects))
        self.arrows: dict[str, tuple[str, str]] = dict(arrows)
        self.compose: dict[tuple[str, str], str] = dict(compose)
        self.identities: dict[str, str] = dict(identities)
        self._into = {c: [] for c in self.objects}
        self._out = {c: [] for c in self.objects}
        for f in sorted(self.arrows):
            d, c = self.arrows[f]
            self._out[d].append(f)
            self._into[c].append(f)
        self._into = {c: tuple(v) for c, v in self._into.items()}
        self._out = {c: tuple(v) for c, v in self._out.items()}
        self._key = (
            self.objects,
            tuple(sorted(self.arrows.items())),
            tuple(sorted(self.compose.items())),
        )

    # structural identity
    def __eq__(self, other) -> bool:
        return isinstance(other, FinCategory) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FinCategory({len(self.objects)} objects, {len(self.arrows)} arrows)"

    def dom(self, f: str) -> str:
        return self.arrows[f][0]

    def cod(self, f: str) -> str:
        return self.arrows[f][1]

    def then(self, f: str, g: str) -> str:
        """The composite "f then g", i.e. g∘f."""
        return self.compose[(f, g)]

    def is_identity(self, f: str) -> bool:
        return f.startswith(ID_PREFIX)

    def arrows_into(self, c: str) -> tuple[str, ...]:
        return self._into[c]

    def arrows_out_of(self, c: str) -> tuple[str, ...]:
        return self._out[c]

    def non_identity_arrows(self) -> tuple[str, ...]:
        return tuple(f for f in sorted(self.arrows) if not self.is_identity(f))


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of a site-property check, with explicit evidence.

    ``witnesses`` lists one completing assignment per instance when the
    property holds; ``counterexample`` names the first failing instance.
    """

    property: SiteProperty
    holds: bool
    witnesses: tuple = ()
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def validate_category(raw: Mapping) -> FinCategory:
    """Build a FinCategory from a raw description, verifying every law.

    ``raw`` has keys "objects", "arrows" (list of {"id","dom","cod"}) and
    "compose" (list of {"first","then","equals"}); identities are implied.
    """
    if not isinstance(raw, Mapping):
        raise FormatError("category description must be a JSON object")
    unknown = set(raw) - {"objects", "arrows", "compose"}
    if unknown:
        raise FormatError(f"unknown keys in category file: {sorted(unknown)}")

    objects = list(raw.get("objects", []))
    if len(set(objects)) != len(objects):
        raise FormatError("duplicate object ids")
    for obj in objects:
        if not isinstance(obj, str) or not obj:
            raise FormatError(f"object ids must be non-empty strings, got {obj!r}")

    arrows: dict[str, tuple[str, str]] = {}
    for entry in raw.get("arrows", []):
        if not isinstance(entry, Mapping) or set(entry) != {"id", "dom", "cod"}:
            raise FormatError(f"malformed arrow entry {entry!r}")
        fid, dom, cod = entry["id"], entry["dom"], entry["cod"]
        if fid.startswith(ID_PREFIX):
            raise IdentityViolation(f"arrow id {fid!r} uses the reserved identity prefix")
        if fid in arrows:
            raise FormatError(f"duplicate arrow id {fid!r}")
        if dom not in objects or cod not in objects:
            raise DanglingEndpoint(f"arrow {fid!r} has unknown endpoint {dom!r} -> {cod!r}")
        arrows[fid] = (dom, cod)

    identities = {obj: identity_id(obj) for obj in objects}
    all_arrows = dict(arrows)
    for obj, ident in identities.items():
        all_arrows[ident] = (obj, obj)

    # declared composites for non-identity pairs
    declared: dict[tuple[str, str], str] = {}
    for entry in raw.get("compose", []):
        if not isinstance(entry, Mapping) or set(entry) != {"first", "then", "equals"}:
            raise FormatError(f"malformed compose entry {entry!r}")
        f, g, h = entry["first"], entry["then"], entry["equals"]
        if f not in arrows or g not in arrows:
            raise DanglingEndpoint(f"compose entry ({f!r}, {g!r}) names an unknown non-identity arrow")
        if h not in all_arrows:
            raise DanglingEndpoint(f"composite {h!r} of ({f!r}, {g!r}) is not a known arrow")
        if arrows[f][1] != arrows[g][0]:
            raise DanglingEndpoint(f"pair ({f!r}, {g!r}) is not composable: cod({f!r}) != dom({g!r})")
        if (f, g) in declared and declared[(f, g)] != h:
            raise AssociativityViolation(
                f"conflicting composites declared for ({f!r}, {g!r}): "
                f"{declared[(f, g)]!r} and {h!r}"
            )
        declared[(f, g)] = h

    # total table: identities first, then declared entries
    compose: dict[tuple[str, str], str] = {}
    for f, (d, c) in all_arrows.items():
        compose[(identities[d], f)] = f
        compose[(f, identities[c])] = f
    for (f, g), h in declared.items():
        key = (f, g)
        if key in compose and compose[key] != h:
            raise IdentityViolation(
                f"composite for ({f!r}, {g!r}) conflicts with an identity law"
            )
        compose[key] = h

    # totality over composable non-identity pairs
    for f, (fd, fc) in all_arrows.items():
        for g, (gd, gc) in all_arrows.items():
            if fc != gd:
                continue
            if (f, g) not in compose:
                raise MissingComposite(f"no composite declared for ({f!r}, {g!r})")
            h = compose[(f, g)]
            hd, hc = all_arrows[h]
            if hd != fd or hc != gc:
                raise DanglingEndpoint(
                    f"composite {h!r} of ({f!r}, {g!r}) has endpoints {hd!r} -> {hc!r}, "
                    f"expected {fd!r} -> {gc!r}"
                )

    # exhaustive associativity over the total table
    for f, (fd, fc) in all_arrows.items():
        for g, (gd, gc) in all_arrows.items():
            if fc != gd:
                continue
            fg = compose[(f, g)]
            for h, (hd, hc) in all_arrows.items():
                if gc != hd:
                    continue
                left = compose[(fg, h)]
                right = compose[(f, compose[(g, h)])]
                if left != right:
                    raise AssociativityViolation(
                        f"(({f!r} then {g!r}) then {h!r}) = {left!r} but "
                        f"({f!r} then ({g!r} then {h!r})) = {right!r}"
                    )

    return FinCategory(objects, all_arrows, compose, identities)


def category_to_raw(C: FinCategory) -> dict:
    """Inverse of validate_category: identities and their composites omitted."""
    arrows = [
        {"id": f, "dom": C.dom(f), "cod": C.cod(f)}
        for f in C.non_identity_arrows()
    ]
    compose = [
        {"first": f, "then": g, "equals": h}
        for (f, g), h in sorted(C.compose.items())
        if not C.is_identity(f) and not C.is_identity(g)
    ]
    return {"objects": list(C.objects), "arrows": arrows, "compose": compose}


def load_category(path: str) -> FinCategory:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return validate_category(raw)


def opposite(C: FinCategory) -> FinCategory:
    """Reverse all arrows; an involution up to structural equality."""
    arrows = {f: (c, d) for f, (d, c) in C.arrows.items()}
    compose = {(g, f): h for (f, g), h in C.compose.items()}
    return FinCategory(C.objects, arrows, compose, C.identities)


def check_site_property(C: FinCategory, prop: SiteProperty) -> PropertyReport:
    """Decide a combinatorial site property with explicit evidence.

    Right Ore: every cospan f:a->c, g:b->c completes to a commuting square.
    Amalgamation: every span completes to a commuting cocone pair.
    Joint embedding: every pair of objects maps into a common object.
    """
    if prop is SiteProperty.RIGHT_ORE:
        witnesses = []
        for f in sorted(C.arrows):
            for g in sorted(C.arrows):
                if C.cod(f) != C.cod(g):
                    continue
                square = _complete_cospan(C, f, g)
                if square is None:
                    return PropertyReport(prop, False, counterexample=(f, g))
                witnesses.append((f, g) + square)
        return PropertyReport(prop, True, witnesses=tuple(witnesses))

    if prop is SiteProperty.AMALGAMATION:
        witnesses = []
        for f in sorted(C.arrows):
            for g in sorted(C.arrows):
                if C.dom(f) != C.dom(g):
                    continue
                cocone = _complete_span(C, f, g)
                if cocone is None:
                    return PropertyReport(prop, False, counterexample=(f, g))
                witnesses.append((f, g) + cocone)
        return PropertyReport(prop, True, witnesses=tuple(witnesses))

    if prop is SiteProperty.JOINT_EMBEDDING:
        witnesses = []
        for a in C.objects:
            for b in C.objects:
                pair = _common_target(C, a, b)
                if pair is None:
                    return PropertyReport(prop, False, counterexample=(a, b))
                witnesses.append((a, b) + pair)
        return PropertyReport(prop, True, witnesses=tuple(witnesses))

    raise ValueError(f"unknown site property {prop!r}")


def _complete_cospan(C: FinCategory, f: str, g: str):
    # h: d->a, k: d->b with "h then f" == "k then g"
    for h in sorted(C.arrows):
        if C.cod(h) != C.dom(f):
            continue
        for k in sorted(C.arrows):
            if C.cod(k) != C.dom(g) or C.dom(k) != C.dom(h):
                continue
            if C.then(h, f) == C.then(k, g):
                return (h, k)
    return None


def _complete_span(C: FinCategory, f: str, g: str):
    # f': cod(f)->d, g': cod(g)->d with "f then f'" == "g then g'"
    for fp in sorted(C.arrows):
        if C.dom(fp) != C.cod(f):
            continue
        for gp in sorted(C.arrows):
            if C.dom(gp) != C.cod(g) or C.cod(gp) != C.cod(fp):
                continue
            if C.then(f, fp) == C.then(g, gp):
                return (fp, gp)
    return None


def _common_target(C: FinCategory, a: str, b: str):
    for f in sorted(C.arrows):
        if C.dom(f) != a:
            continue
        for g in sorted(C.arrows):
            if C.dom(g) == b and C.cod(g) == C.cod(f):
                return (f, g)
    return None
