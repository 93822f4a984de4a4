"""Core grammar types for multiple context-free grammars.

A nonterminal of arity q derives q-tuples of terminal strings. A concrete
rule rewrites tuples drawn from its right-hand side nonterminals through
per-component templates; each right-hand variable may be used at most once
across all templates. Large symmetric rule families are carried as compact
schema declarations instead of enumerated rules; a schema instance supplies
an explicit Blocking that says how the 2m source components are regrouped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

Word = tuple[str, ...]
TemplateItem = tuple[str, str]  # ("term", symbol) or ("var", name)
Template = tuple[TemplateItem, ...]


def term(symbol: str) -> TemplateItem:
    return ("term", symbol)


def var(name: str) -> TemplateItem:
    return ("var", name)


class GrammarFormatError(ValueError):
    """Raised when serialized grammar or derivation data is malformed."""


class InvalidGrammarError(ValueError):
    """Raised when an operation requires a grammar that fails validation."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class Rule:
    """One concrete production: lhs(templates...) <- rhs nonterminals."""

    lhs: str
    templates: tuple[Template, ...]
    rhs: tuple[tuple[str, tuple[str, ...]], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.templates)

    def rhs_variables(self) -> list[str]:
        out: list[str] = []
        for _, names in self.rhs:
            out.extend(names)
        return out


@dataclass(frozen=True)
class CombineSchema:
    """Declares a permutation-indexed family of binary regrouping rules.

    An instance maps two arity-m premises (source slots 1..m and m+1..2m)
    to a conclusion whose components concatenate the sources per a Blocking.
    """

    nonterminal: str
    arity: int


@dataclass(frozen=True)
class Blocking:
    """Ordered partition of source slots 1..2m into m ordered blocks."""

    blocks: tuple[tuple[int, ...], ...]

    def violations(self, m: int) -> list[str]:
        out: list[str] = []
        if len(self.blocks) != m:
            out.append(f"expected {m} blocks, got {len(self.blocks)}")
        seen = sorted(i for block in self.blocks for i in block)
        if seen != list(range(1, 2 * m + 1)):
            out.append(f"blocks must use each source slot 1..{2 * m} exactly once")
        return out


@dataclass(frozen=True)
class Grammar:
    terminals: tuple[str, ...]
    nonterminals: tuple[tuple[str, int], ...]
    start: str
    rules: tuple[Rule, ...]
    schemas: tuple[CombineSchema, ...] = ()

    @cached_property
    def arities(self) -> dict[str, int]:
        return dict(self.nonterminals)

    @cached_property
    def degree(self) -> int:
        """Largest declared arity."""
        return max((a for _, a in self.nonterminals), default=0)


def instantiate(template: Template, subst: dict[str, Word]) -> Word:
    """Apply a substitution to one template, yielding a terminal string."""
    out: list[str] = []
    for kind, value in template:
        if kind == "term":
            out.append(value)
        elif kind == "var":
            out.extend(subst[value])
        else:
            raise ValueError(f"bad template item kind: {kind!r}")
    return tuple(out)


def validate_grammar(g: Grammar) -> list[str]:
    """Static checks; returns a list of violations, empty when the grammar is well formed."""
    out: list[str] = []
    seen_terms: set[str] = set()
    for t in g.terminals:
        if t in seen_terms:
            out.append(f"duplicate terminal {t!r}")
        seen_terms.add(t)

    arities: dict[str, int] = {}
    for name, arity in g.nonterminals:
        if name in arities:
            out.append(f"duplicate nonterminal {name!r}")
        if name in seen_terms:
            out.append(f"symbol {name!r} declared both terminal and nonterminal")
        if arity < 1:
            out.append(f"nonterminal {name!r} arity must be >= 1, got {arity}")
        arities[name] = arity

    if g.start not in arities:
        out.append(f"start symbol {g.start!r} not declared")
    elif arities[g.start] != 1:
        out.append(f"start arity != 1 (got {arities[g.start]})")

    for idx, rule in enumerate(g.rules):
        where = f"rule {idx}"
        if rule.lhs not in arities:
            out.append(f"{where}: lhs nonterminal {rule.lhs!r} not declared")
        elif len(rule.templates) != arities[rule.lhs]:
            out.append(
                f"{where}: {len(rule.templates)} templates for arity "
                f"{arities[rule.lhs]} nonterminal {rule.lhs!r}"
            )
        introduced: set[str] = set()
        for nt, names in rule.rhs:
            if nt not in arities:
                out.append(f"{where}: rhs nonterminal {nt!r} not declared")
            elif len(names) != arities[nt]:
                out.append(f"{where}: {len(names)} variables for arity {arities[nt]} premise {nt!r}")
            for v in names:
                if v in introduced:
                    out.append(f"{where}: variable reused: {v!r} introduced twice")
                introduced.add(v)
        used: set[str] = set()
        for template in rule.templates:
            for kind, value in template:
                if kind == "term":
                    if value not in seen_terms:
                        out.append(f"{where}: unknown terminal {value!r} in template")
                elif kind == "var":
                    if value not in introduced:
                        out.append(f"{where}: unknown variable {value!r} in template")
                    if value in used:
                        out.append(f"{where}: variable reused: {value!r} used twice")
                    used.add(value)
                else:
                    out.append(f"{where}: bad template item kind {kind!r}")

    for sidx, schema in enumerate(g.schemas):
        where = f"schema {sidx}"
        if schema.nonterminal not in arities:
            out.append(f"{where}: nonterminal {schema.nonterminal!r} not declared")
        elif schema.arity != arities[schema.nonterminal]:
            out.append(
                f"{where}: arity {schema.arity} does not match declared "
                f"{arities[schema.nonterminal]} for {schema.nonterminal!r}"
            )
    return out


def require_valid(g: Grammar) -> None:
    violations = validate_grammar(g)
    if violations:
        raise InvalidGrammarError(violations)


def _template_to_json(template: Template) -> list[dict[str, str]]:
    return [{kind: value} for kind, value in template]


def _template_from_json(items: object, where: str) -> Template:
    if not isinstance(items, list):
        raise GrammarFormatError(f"{where}: template must be a list")
    out: list[TemplateItem] = []
    for item in items:
        if not isinstance(item, dict) or len(item) != 1:
            raise GrammarFormatError(f"{where}: template item must be a single-key object")
        (kind, value), = item.items()
        if kind not in ("term", "var") or not isinstance(value, str):
            raise GrammarFormatError(f"{where}: template item must be {{'term': sym}} or {{'var': name}}")
        out.append((kind, value))
    return tuple(out)


def grammar_to_json_dict(g: Grammar) -> dict:
    return {
        "terminals": list(g.terminals),
        "nonterminals": [{"name": n, "arity": a} for n, a in g.nonterminals],
        "start": g.start,
        "rules": [
            {
                "lhs": {"nt": r.lhs, "templates": [_template_to_json(t) for t in r.templates]},
                "rhs": [{"nt": nt, "vars": list(names)} for nt, names in r.rhs],
            }
            for r in g.rules
        ],
        "schemas": [{"nt": s.nonterminal, "arity": s.arity} for s in g.schemas],
    }


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise GrammarFormatError(message)


def grammar_from_json_dict(data: object) -> Grammar:
    _expect(isinstance(data, dict), "grammar must be a JSON object")
    assert isinstance(data, dict)
    terminals = data.get("terminals")
    _expect(isinstance(terminals, list) and all(isinstance(t, str) for t in terminals),
            "terminals must be a list of strings")
    nts = data.get("nonterminals")
    _expect(isinstance(nts, list), "nonterminals must be a list")
    decls: list[tuple[str, int]] = []
    for entry in nts:
        _expect(isinstance(entry, dict) and isinstance(entry.get("name"), str)
                and isinstance(entry.get("arity"), int),
                "nonterminal entries must be {name, arity}")
        decls.append((entry["name"], entry["arity"]))
    start = data.get("start")
    _expect(isinstance(start, str), "start must be a string")
    raw_rules = data.get("rules")
    _expect(isinstance(raw_rules, list), "rules must be a list")
    rules: list[Rule] = []
    for idx, entry in enumerate(raw_rules):
        where = f"rule {idx}"
        _expect(isinstance(entry, dict), f"{where}: must be an object")
        lhs = entry.get("lhs")
        _expect(isinstance(lhs, dict) and isinstance(lhs.get("nt"), str)
                and isinstance(lhs.get("templates"), list),
                f"{where}: lhs must be {{nt, templates}}")
        templates = tuple(_template_from_json(t, where) for t in lhs["templates"])
        raw_rhs = entry.get("rhs", [])
        _expect(isinstance(raw_rhs, list), f"{where}: rhs must be a list")
        rhs: list[tuple[str, tuple[str, ...]]] = []
        for r in raw_rhs:
            _expect(isinstance(r, dict) and isinstance(r.get("nt"), str)
                    and isinstance(r.get("vars"), list)
                    and all(isinstance(v, str) for v in r["vars"]),
                    f"{where}: rhs entries must be {{nt, vars}}")
            rhs.append((r["nt"], tuple(r["vars"])))
        rules.append(Rule(lhs["nt"], templates, tuple(rhs)))
    raw_schemas = data.get("schemas", [])
    _expect(isinstance(raw_schemas, list), "schemas must be a list")
    schemas: list[CombineSchema] = []
    for entry in raw_schemas:
        _expect(isinstance(entry, dict) and isinstance(entry.get("nt"), str)
                and isinstance(entry.get("arity"), int),
                "schema entries must be {nt, arity}")
        schemas.append(CombineSchema(entry["nt"], entry["arity"]))
    return Grammar(tuple(terminals), tuple(decls), start, tuple(rules), tuple(schemas))


def canonical_json(data: object) -> str:
    """Deterministic serialization used for every JSON artifact this package writes."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def dumps_grammar(g: Grammar) -> str:
    return canonical_json(grammar_to_json_dict(g))


def loads_grammar(text: str) -> Grammar:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GrammarFormatError(f"invalid JSON: {exc}") from exc
    return grammar_from_json_dict(data)
