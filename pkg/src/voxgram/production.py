"""Derivation engine: grow a production by applying grammar rules.

A production holds placed shape instances, an occupancy map, and the step
history. Rule applications that would write a different block type into an
occupied cell are conflicts and are rejected; re-covering cells with the
same type is allowed. Exact re-placement of a shape at a pose it already
occupies is a no-op. Every mutation is replayable: a production equals the
replay of its history, which is how undo works and how documents are
verified on load.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass

from .errors import (
    ConflictingPlacementError,
    FormatError,
    NothingToUndoError,
    UnknownIdError,
)
from .grammar import ShapeGrammar, ShapeRule
from .model import Pos, VoxelModel
from .shapes import GridTransform


@dataclass(frozen=True)
class PlacedShape:
    """One shape instance in the production.

    ``pose`` maps the shape's class canonical form to world coordinates;
    ``cells`` is that image, and ``plane`` the realized fixed axis of planar
    shapes (None for 3d shapes).
    """

    shape: int
    cls: int
    pose: GridTransform
    cells: dict[Pos, str]
    plane: int | None


@dataclass(frozen=True)
class Choice:
    """One applicable (placed shape, rule) option."""

    target: int  # index into Production.placed
    rule_index: int  # index into the grammar's rule list
    rule: ShapeRule
    pose: GridTransform  # world pose of the rhs canonical form
    cells: dict[Pos, str]
    conflict: bool
    duplicate: bool


class Production:
    """Derivation state over one grammar. Instances are never mutated in place."""

    def __init__(
        self,
        grammar: ShapeGrammar,
        seed: int,
        initial: int,
        placed: list[PlacedShape],
        occupancy: dict[Pos, str],
        history: list[tuple],
    ):
        self.grammar = grammar
        self.seed = seed
        self.initial = initial
        self.placed = placed
        self.occupancy = occupancy
        self.history = history

    def __eq__(self, other):
        return (
            isinstance(other, Production)
            and self.seed == other.seed
            and self.initial == other.initial
            and self.placed == other.placed
            and self.history == other.history
        )

    # -- construction --------------------------------------------------------

    @staticmethod
    def _make_placed(g: ShapeGrammar, sid: int, pose: GridTransform) -> PlacedShape:
        cls = g.class_of(sid)
        cells = pose.apply_cells(g.canonical_of_class(cls))
        shape = g.shape(sid)
        plane = shape.plane
        if plane is not None:
            net_rot = (pose.rot - g.origin_pose(sid).rot) % 4
            if net_rot % 2 == 1 and plane != 2:
                plane = 1 - plane
        return PlacedShape(sid, cls, pose, cells, plane)


def start(g: ShapeGrammar, initial: int | None = None, seed: int = 0) -> Production:
    """A production holding just the initial shape at its origin pose."""
    sid = g.initial if initial is None else initial
    g.shape(sid)  # raises UnknownIdError for bad ids
    first = Production._make_placed(g, sid, g.origin_pose(sid))
    return Production(g, seed, sid, [first], dict(first.cells), [])


def step_choices(p: Production) -> list[Choice]:
    """All (placed shape, applicable rule) options, in deterministic order."""
    g = p.grammar
    existing = {(ps.shape, ps.pose) for ps in p.placed}
    out = []
    for target, ps in enumerate(p.placed):
        for rule_index, rule in g.rules_for_class(ps.cls):
            pose = g.rule_pose(rule, ps.pose)
            cells = pose.apply_cells(g.canonical_of_class(g.class_of(rule.rhs)))
            conflict = any(
                p.occupancy.get(pos) not in (None, kind) for pos, kind in cells.items()
            )
            duplicate = (rule.rhs, pose) in existing
            out.append(Choice(target, rule_index, rule, pose, cells, conflict, duplicate))
    return out


def _applied(p: Production, choice: Choice) -> Production:
    new_placed = Production._make_placed(p.grammar, choice.rule.rhs, choice.pose)
    occupancy = dict(p.occupancy)
    occupancy.update(new_placed.cells)
    return Production(
        p.grammar,
        p.seed,
        p.initial,
        p.placed + [new_placed],
        occupancy,
        p.history + [("apply", choice.target, choice.rule_index)],
    )


def apply_choice(p: Production, index: int) -> Production:
    """Apply the index-th current choice.

    Duplicates are no-ops; conflicts raise ConflictingPlacementError and
    leave the production unchanged. A stale index raises UnknownIdError.
    """
    choices = step_choices(p)
    if not 0 <= index < len(choices):
        raise UnknownIdError(f"stale choice index {index} (have {len(choices)})")
    choice = choices[index]
    if choice.duplicate:
        return p
    if choice.conflict:
        raise ConflictingPlacementError(
            f"choice {index} writes a different type into an occupied cell"
        )
    return _applied(p, choice)


def _apply_option(p: Production, target: int, rule_index: int) -> Production:
    """Re-apply a recorded step; used by replay."""
    if not 0 <= target < len(p.placed) or not 0 <= rule_index < len(p.grammar.rules):
        raise FormatError(f"history step ({target}, {rule_index}) is out of range")
    ps = p.placed[target]
    rule = p.grammar.rules[rule_index]
    if rule.lhs_class != ps.cls:
        raise FormatError(f"history step ({target}, {rule_index}) does not match the target class")
    pose = p.grammar.rule_pose(rule, ps.pose)
    cells = pose.apply_cells(p.grammar.canonical_of_class(p.grammar.class_of(rule.rhs)))
    conflict = any(p.occupancy.get(pos) not in (None, kind) for pos, kind in cells.items())
    if conflict:
        raise FormatError(f"history step ({target}, {rule_index}) conflicts with occupancy")
    return _applied(p, Choice(target, rule_index, rule, pose, cells, False, False))


def _apply_enclosure_event(p: Production) -> Production:
    from .enclosure import surviving_indices

    keep = surviving_indices(p.placed)
    placed = [p.placed[i] for i in keep]
    occupancy: dict[Pos, str] = {}
    for ps in placed:
        occupancy.update(ps.cells)
    return Production(
        p.grammar, p.seed, p.initial, placed, occupancy, p.history + [("enclosure",)]
    )


def replay(g: ShapeGrammar, seed: int, initial: int, history: list[tuple]) -> Production:
    """Rebuild a production from its recorded history."""
    p = start(g, initial, seed)
    for event in history:
        if event[0] == "apply":
            p = _apply_option(p, event[1], event[2])
        elif event[0] == "enclosure":
            p = _apply_enclosure_event(p)
        else:
            raise FormatError(f"unknown history event {event!r}")
    return p


def undo(p: Production) -> Production:
    """Drop the last history event; the result equals a fresh replay."""
    if not p.history:
        raise NothingToUndoError("production has no applied steps")
    return replay(p.grammar, p.seed, p.initial, p.history[:-1])


def generate(
    g: ShapeGrammar,
    seed: int = 0,
    max_steps: int = 20,
    policy: str = "reject",
    initial: int | None = None,
) -> Production:
    """Random derivation: uniform choice among safe options each step.

    Conflicting and duplicate options are filtered out; generation stops
    early when none remain. Deterministic for a given seed.
    """
    if policy != "reject":
        raise ValueError(f"unknown conflict policy {policy!r}")
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    p = start(g, initial, seed)
    rng = random.Random(seed)
    for _ in range(max_steps):
        options = [c for c in step_choices(p) if not c.conflict and not c.duplicate]
        if not options:
            break
        p = _applied(p, options[rng.randrange(len(options))])
    return p


def to_model(p: Production, name: str | None = None) -> VoxelModel:
    """The occupancy map as a voxel model."""
    return VoxelModel(name or f"generated-{p.seed}", dict(p.occupancy))


def validate(p: Production) -> None:
    """Assert occupancy consistency and replay determinism; raises on violation."""
    for ps in p.placed:
        for pos, kind in ps.cells.items():
            if p.occupancy.get(pos) != kind:
                raise FormatError(f"occupancy disagrees with a placed shape at {list(pos)}")
    covered = {pos for ps in p.placed for pos in ps.cells}
    if covered != set(p.occupancy):
        raise FormatError("occupancy holds cells no placed shape owns")
    if replay(p.grammar, p.seed, p.initial, p.history) != p:
        raise FormatError("history replay does not reproduce the production")


# ------------------------------------------------------------------ wire format


def production_to_doc(p: Production) -> dict:
    return {
        "seed": p.seed,
        "initial": p.initial,
        "placed": [
            {"shape": ps.shape, "class": ps.cls, "pose": ps.pose.to_doc()}
            for ps in p.placed
        ],
        "history": [list(event) for event in p.history],
    }


def production_from_doc(g: ShapeGrammar, doc: object) -> Production:
    if not isinstance(doc, dict):
        raise FormatError("production document must be a JSON object")
    seed = doc.get("seed")
    initial = doc.get("initial")
    if not isinstance(seed, int) or not isinstance(initial, int):
        raise FormatError("production document needs integer 'seed' and 'initial'")
    raw_history = doc.get("history")
    if not isinstance(raw_history, list):
        raise FormatError("production document needs a 'history' list")
    history: list[tuple] = []
    for entry in raw_history:
        if not isinstance(entry, list) or not entry:
            raise FormatError(f"bad history entry {entry!r}")
        if entry[0] == "apply" and len(entry) == 3:
            history.append(("apply", entry[1], entry[2]))
        elif entry[0] == "enclosure" and len(entry) == 1:
            history.append(("enclosure",))
        else:
            raise FormatError(f"bad history entry {entry!r}")
    p = replay(g, seed, initial, history)
    raw_placed = doc.get("placed")
    if raw_placed is not None:
        got = [
            {"shape": ps.shape, "class": ps.cls, "pose": ps.pose.to_doc()}
            for ps in p.placed
        ]
        if got != raw_placed:
            raise FormatError("production 'placed' does not match its history replay")
    return p


def fingerprint(p: Production) -> str:
    """Stable content hash of the production state."""
    blob = json.dumps(production_to_doc(p), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
