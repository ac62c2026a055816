"""Grammar induction: adjacency-derived rewrite rules shared across match classes.

Every pair of shapes with face-adjacent blocks in the same source model
yields two directed rules, one anchored at each shape. A rule is keyed by
the match class of its anchor, so it applies at every class member: the
anchor-to-member transform carries the rule's right-hand side along, which
is what lets a single observed adjacency generalize across the structure
and across example models that share a class.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DanglingReferenceError, FormatError, UnknownIdError
from .inference import ShapeSet
from .model import NEIGHBOR_OFFSETS, Pos, zyx_key
from .shapes import (
    AXES,
    GridTransform,
    MatchClass,
    Shape,
    ShapeSpec,
    canonical_cells,
    match_classes,
)


@dataclass(frozen=True)
class ShapeLabel:
    """Bookkeeping attached to a shape: where it sits in which example."""

    shape: int
    origin_pose: GridTransform  # places the canonical form at the example position
    model: str


@dataclass(frozen=True)
class ShapeRule:
    """Directed rule: any shape matching the anchor may grow the rhs next to it."""

    lhs_class: int
    lhs_anchor: int
    rhs: int


@dataclass
class ShapeGrammar:
    shapes: list[Shape]
    labels: dict[int, ShapeLabel]
    classes: list[MatchClass]
    rules: list[ShapeRule]
    initial: int
    spec: ShapeSpec

    # index caches, built once after construction
    _by_id: dict[int, Shape] = field(default_factory=dict, compare=False, repr=False)
    _class_of: dict[int, int] = field(default_factory=dict, compare=False, repr=False)
    _rules_by_class: dict[int, list[tuple[int, ShapeRule]]] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self):
        self._by_id = {s.sid: s for s in self.shapes}
        self._class_of = {m: c.cid for c in self.classes for m in c.members}
        self._rules_by_class = {}
        for idx, r in enumerate(self.rules):
            self._rules_by_class.setdefault(r.lhs_class, []).append((idx, r))

    def shape(self, sid: int) -> Shape:
        try:
            return self._by_id[sid]
        except KeyError:
            raise UnknownIdError(f"no shape with id {sid}") from None

    def class_of(self, sid: int) -> int:
        try:
            return self._class_of[sid]
        except KeyError:
            raise UnknownIdError(f"no class for shape {sid}") from None

    def match_class(self, cid: int) -> MatchClass:
        if 0 <= cid < len(self.classes):
            return self.classes[cid]
        raise UnknownIdError(f"no match class {cid}")

    def rules_for_class(self, cid: int) -> list[tuple[int, ShapeRule]]:
        """(rule index, rule) pairs whose anchor class is ``cid``, in rule order."""
        self.match_class(cid)
        return list(self._rules_by_class.get(cid, []))

    def origin_pose(self, sid: int) -> GridTransform:
        return self.labels[sid].origin_pose

    def canonical_of_class(self, cid: int) -> dict[Pos, str]:
        return canonical_cells(self.match_class(cid).canonical)

    def rule_pose(self, rule: ShapeRule, placed_pose: GridTransform) -> GridTransform:
        """World pose of the rule's rhs when applied at a placed shape.

        ``placed_pose`` maps the placed shape's class canonical form to world
        coordinates. The anchor-relative offset of the rhs in the example is
        re-expressed through the anchor's origin pose and carried along.
        """
        rel = self.origin_pose(rule.lhs_anchor).inverse().compose(self.origin_pose(rule.rhs))
        return placed_pose.compose(rel)


def _adjacent_pairs(shapes: Sequence[Shape]) -> list[tuple[int, int]]:
    """Unordered id pairs with at least one face-adjacent block pair."""
    owners: dict[Pos, list[int]] = {}
    for s in shapes:
        for p in s.cells:
            owners.setdefault(p, []).append(s.sid)
    pairs: set[tuple[int, int]] = set()
    for s in shapes:
        for x, y, z in s.cells:
            for dx, dy, dz in NEIGHBOR_OFFSETS:
                for other in owners.get((x + dx, y + dy, z + dz), ()):
                    if other != s.sid:
                        pairs.add((min(s.sid, other), max(s.sid, other)))
    return sorted(pairs)


def induce(sets: Sequence[ShapeSet], initial: int | None = None) -> ShapeGrammar:
    """Build a grammar from one or more shape sets.

    Shape ids are renumbered to be globally unique, in set order then id
    order. Match classes span all sets, so examples sharing a class are
    linked. Adjacency (and therefore rules) never crosses models.
    """
    if not sets:
        raise ValueError("at least one shape set is required")
    spec = sets[0].spec
    if any(s.spec != spec for s in sets):
        raise FormatError("all shape sets must share one shape specification")
    shapes: list[Shape] = []
    model_of: dict[int, str] = {}
    rules: list[ShapeRule] = []
    per_set_shapes: list[list[Shape]] = []
    gid = 0
    for shape_set in sets:
        if shape_set.source is not None:
            shape_set.validate(require_irredundant=False)
        renumbered = []
        for s in sorted(shape_set.shapes, key=lambda s: s.sid):
            renumbered.append(Shape(gid, dict(s.cells), s.spec, s.plane))
            model_of[gid] = shape_set.model_name
            gid += 1
        shapes.extend(renumbered)
        per_set_shapes.append(renumbered)
    classes = match_classes(shapes)
    class_of = {m: c.cid for c in classes for m in c.members}
    rep = {m: c.rep_transforms[m] for c in classes for m in c.members}
    labels = {s.sid: ShapeLabel(s.sid, rep[s.sid], model_of[s.sid]) for s in shapes}
    for group in per_set_shapes:
        for a, b in _adjacent_pairs(group):
            rules.append(ShapeRule(class_of[a], a, b))
            rules.append(ShapeRule(class_of[b], b, a))
    rules.sort(key=lambda r: (r.lhs_class, r.lhs_anchor, r.rhs))
    if initial is None:
        initial = min(s.sid for s in shapes)
    elif all(s.sid != initial for s in shapes):
        raise UnknownIdError(f"initial shape {initial} does not exist")
    return ShapeGrammar(shapes, labels, classes, rules, initial, spec)


def applicable_rules(g: ShapeGrammar, placed) -> list[tuple[ShapeRule, GridTransform]]:
    """Rules usable at a placed shape, with the world pose of each rhs.

    ``placed`` needs ``cls`` (match class id) and ``pose`` (canonical form
    to world) attributes; the production module's PlacedShape qualifies.
    """
    return [
        (rule, g.rule_pose(rule, placed.pose))
        for _, rule in g.rules_for_class(placed.cls)
    ]


# ------------------------------------------------------------------ wire format


def grammar_to_doc(g: ShapeGrammar) -> dict:
    return {
        "spec": g.spec.value,
        "shapes": [
            {
                "id": s.sid,
                "plane": s.plane,
                "blocks": [{"t": s.cells[p], "p": list(p)} for p in sorted(s.cells, key=zyx_key)],
            }
            for s in g.shapes
        ],
        "labels": [
            {
                "shape": sid,
                "model": g.labels[sid].model,
                "pose": g.labels[sid].origin_pose.to_doc(),
            }
            for sid in sorted(g.labels)
        ],
        "classes": [list(c.members) for c in g.classes],
        "rules": [
            {"lhs_class": r.lhs_class, "lhs_anchor": r.lhs_anchor, "rhs": r.rhs}
            for r in g.rules
        ],
        "initial": g.initial,
    }


def grammar_from_doc(doc: object) -> ShapeGrammar:
    if not isinstance(doc, dict):
        raise FormatError("grammar document must be a JSON object")
    try:
        spec = ShapeSpec(doc.get("spec"))
    except ValueError:
        raise FormatError(f"unknown spec {doc.get('spec')!r}") from None
    raw_shapes = doc.get("shapes")
    if not isinstance(raw_shapes, list) or not raw_shapes:
        raise FormatError("grammar document needs a non-empty 'shapes' list")
    shapes: list[Shape] = []
    for entry in raw_shapes:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
            raise FormatError("each grammar shape needs an integer 'id'")
        blocks = entry.get("blocks")
        if not isinstance(blocks, list) or not blocks:
            raise FormatError(f"grammar shape {entry.get('id')} has no blocks")
        cells: dict[Pos, str] = {}
        for b in blocks:
            if (
                not isinstance(b, dict)
                or not isinstance(b.get("t"), str)
                or not isinstance(b.get("p"), list)
                or len(b["p"]) != 3
                or any(isinstance(v, bool) or not isinstance(v, int) for v in b["p"])
            ):
                raise FormatError(f"bad block entry in grammar shape {entry['id']}")
            cells[tuple(b["p"])] = b["t"]
        plane = entry.get("plane")
        if plane is not None and plane not in AXES:
            raise FormatError(f"bad plane {plane!r}")
        shapes.append(Shape.build(entry["id"], cells, spec, plane))
    ids = {s.sid for s in shapes}
    if len(ids) != len(shapes):
        raise FormatError("duplicate shape ids in grammar document")

    classes = match_classes(shapes)
    doc_classes = doc.get("classes")
    if doc_classes is not None:
        want = [list(c.members) for c in classes]
        if doc_classes != want:
            raise FormatError("grammar 'classes' disagree with the shapes' match classes")
    class_of = {m: c.cid for c in classes for m in c.members}

    raw_labels = doc.get("labels")
    if not isinstance(raw_labels, list):
        raise FormatError("grammar document needs a 'labels' list")
    labels: dict[int, ShapeLabel] = {}
    by_id = {s.sid: s for s in shapes}
    for entry in raw_labels:
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("shape"), int)
            or not isinstance(entry.get("model"), str)
        ):
            raise FormatError("bad label entry")
        sid = entry["shape"]
        if sid not in by_id:
            raise DanglingReferenceError(f"label references missing shape {sid}")
        pose = GridTransform.from_doc(entry.get("pose"))
        canon = canonical_cells(next(c.canonical for c in classes if sid in c.members))
        if pose.apply_cells(canon) != by_id[sid].cells:
            raise FormatError(f"label pose for shape {sid} does not reproduce its blocks")
        labels[sid] = ShapeLabel(sid, pose, entry["model"])
    if set(labels) != ids:
        raise FormatError("every shape needs exactly one label")

    raw_rules = doc.get("rules")
    if not isinstance(raw_rules, list):
        raise FormatError("grammar document needs a 'rules' list")
    rules = []
    for entry in raw_rules:
        if not isinstance(entry, dict) or not all(
            isinstance(entry.get(k), int) for k in ("lhs_class", "lhs_anchor", "rhs")
        ):
            raise FormatError("bad rule entry")
        anchor, rhs = entry["lhs_anchor"], entry["rhs"]
        if anchor not in ids or rhs not in ids:
            raise DanglingReferenceError(f"rule references missing shape {anchor} -> {rhs}")
        if class_of[anchor] != entry["lhs_class"]:
            raise DanglingReferenceError(
                f"rule lhs_class {entry['lhs_class']} is not the class of shape {anchor}"
            )
        rules.append(ShapeRule(entry["lhs_class"], anchor, rhs))

    initial = doc.get("initial")
    if not isinstance(initial, int) or initial not in ids:
        raise DanglingReferenceError(f"initial shape {initial!r} does not exist")
    return ShapeGrammar(shapes, labels, classes, rules, initial, spec)


def save_grammar(g: ShapeGrammar) -> str:
    return json.dumps(grammar_to_doc(g), separators=(",", ":"))


def load_grammar(data: str | bytes) -> ShapeGrammar:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc
    return grammar_from_doc(doc)
