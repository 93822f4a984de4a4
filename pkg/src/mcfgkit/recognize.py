"""Bounded bottom-up recognition for concrete-rule grammars.

The engine saturates the set of derivable nonterminal instances, keeping
only instances whose total component length stays within a budget (and,
when recognizing a specific string, whose components are contiguous token
runs of it). Both filters are exact for non-deleting grammars: a variable
occurs at most once across a rule's templates, so every component of every
instance used in a derivation of S(s) is spliced into s as one contiguous
block, and total component length never shrinks along a derivation. For
grammars that drop variables the closure can under-accept.

Witness choice is deterministic: instances keep their first discovery,
found by scanning rules in index order and premise tuples in discovery
order, pass after pass until a fixpoint.
"""

from __future__ import annotations

from typing import Callable, Iterator

from .derivation import Derivation, Instance, RuleInstance
from .grammar import Grammar, Word, instantiate, require_valid


class SchemaPresentError(ValueError):
    """Raised when recognition is asked for a grammar with rule schemas."""


_Provenance = tuple[int, tuple[Instance, ...]]


def _premise_tuples(pools: list[list[Instance]]) -> Iterator[tuple[Instance, ...]]:
    """All ways to pick one instance per pool, earliest discoveries first."""
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _premise_tuples(pools[1:]):
            yield (head,) + rest


def _close(
    g: Grammar,
    budget: int,
    component_ok: Callable[[Word], bool],
) -> dict[Instance, _Provenance]:
    derived: dict[Instance, _Provenance] = {}
    by_nt: dict[str, list[Instance]] = {nt: [] for nt, _ in g.nonterminals}

    def admit(inst: Instance, prov: _Provenance) -> bool:
        if inst in derived:
            return False
        if sum(len(c) for c in inst.components) > budget:
            return False
        if not all(component_ok(c) for c in inst.components):
            return False
        derived[inst] = prov
        by_nt[inst.nt].append(inst)
        return True

    changed = True
    while changed:
        changed = False
        for index, rule in enumerate(g.rules):
            pools = [list(by_nt[nt]) for nt, _ in rule.rhs]
            for premises in _premise_tuples(pools):
                subst: dict[str, Word] = {}
                for (_, names), inst in zip(rule.rhs, premises):
                    subst.update(zip(names, inst.components))
                comps = tuple(instantiate(t, subst) for t in rule.templates)
                if admit(Instance(rule.lhs, comps), (index, premises)):
                    changed = True
    return derived


def _witness(g: Grammar, target: Instance, derived: dict[Instance, _Provenance]) -> Derivation:
    steps: list[RuleInstance] = []
    position: dict[Instance, int] = {}

    def build(inst: Instance) -> int:
        if inst in position:
            return position[inst]
        index, premises = derived[inst]
        where = tuple(build(p) for p in premises)
        subst: dict[str, Word] = {}
        for (_, names), p in zip(g.rules[index].rhs, premises):
            subst.update(zip(names, p.components))
        steps.append(RuleInstance.concrete(index, subst, inst.nt, inst.components, where))
        position[inst] = len(steps) - 1
        return position[inst]

    build(target)
    return Derivation(tuple(steps))


def recognize_bounded(g: Grammar, s: Word) -> tuple[bool, Derivation | None]:
    """Decide whether g derives S(s); returns (answer, witness or None).

    Only concrete-rule grammars are supported; a grammar carrying schemas
    raises SchemaPresentError since its rule family cannot be enumerated.
    The returned witness always passes check_derivation and ends in S(s).
    """
    require_valid(g)
    if g.schemas:
        raise SchemaPresentError(
            "recognition requires a schema-free grammar; expand or avoid schemas"
        )
    runs = {s[i:j] for i in range(len(s) + 1) for j in range(i, len(s) + 1)}
    derived = _close(g, len(s), runs.__contains__)
    target = Instance(g.start, (s,))
    if target not in derived:
        return False, None
    return True, _witness(g, target, derived)


def bounded_language(g: Grammar, max_len: int) -> set[Word]:
    """All words of length <= max_len derivable from the start symbol.

    Complete for non-deleting grammars by the same argument as
    recognize_bounded; the closure budget is max_len.
    """
    require_valid(g)
    if g.schemas:
        raise SchemaPresentError(
            "bounded language requires a schema-free grammar; expand or avoid schemas"
        )
    derived = _close(g, max_len, lambda _: True)
    return {inst.components[0] for inst in derived if inst.nt == g.start}
