"""Rule engine for two-sided integer bounds on TC^n_r(G).

A :class:`BoundTable` holds, for n = 1..n_max, a lower and an upper bound
together with the tags of the rules that attain each bound. Rules only
ever raise lower bounds or lower upper bounds; a crossing is a
:class:`ContradictionError`. Each rule's contribution does not depend on
the table it is applied to, so applying any set of rules in any order
and then :func:`monotone_closure` yields the same table.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .growth import davis_pair, gamma
from .report import Report

log = logging.getLogger(__name__)


class Trait(str, Enum):
    INFINITE_COH_DIM = "InfiniteCohDim"
    EVEN_ORDER = "EvenOrder"
    IS_Z2 = "IsZ2"
    IS_Q8 = "IsQ8"


class ContradictionError(ValueError):
    """A lower bound exceeded an upper bound."""

    def __init__(self, n: int, lower: int, upper: int, lower_tags: Sequence[str], upper_tags: Sequence[str]):
        self.n, self.lower, self.upper = n, lower, upper
        self.lower_tags, self.upper_tags = tuple(lower_tags), tuple(upper_tags)
        super().__init__(
            f"contradiction at n={n}: lower {lower} [{', '.join(self.lower_tags)}] "
            f"> upper {upper} [{', '.join(self.upper_tags)}]"
        )


FACT_KINDS = ("exact", "lower", "upper")


@dataclass(frozen=True)
class IngestedFact:
    group: str
    n: int
    r: int
    kind: str
    value: int
    source: str

    def __post_init__(self) -> None:
        if self.kind not in FACT_KINDS:
            raise ValueError(f"fact kind must be one of {FACT_KINDS}, got {self.kind!r}")
        if self.n < 1 or self.r < 2 or self.value < 0:
            raise ValueError(f"invalid fact {self}")


def load_facts(path: str | Path) -> list[IngestedFact]:
    """Read a line-delimited JSON fact file; blank lines and ``#`` comments are skipped."""
    facts = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                facts.append(IngestedFact(**json.loads(line)))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad fact record: {exc}") from exc
    return facts


def bundled_facts_path() -> Path:
    return Path(__file__).parent / "data" / "fty.jsonl"


@dataclass(frozen=True)
class GroupProfile:
    """A group described by the hypotheses the bound rules need.

    Implied traits are added on construction: Z2 and Q8 have even order,
    and an (finite) even-order group has infinite cohomological dimension.
    """

    name: str
    traits: frozenset[Trait]
    facts: tuple[IngestedFact, ...] = ()

    def __post_init__(self) -> None:
        traits = set(Trait(t) for t in self.traits)
        if traits & {Trait.IS_Z2, Trait.IS_Q8}:
            traits.add(Trait.EVEN_ORDER)
        if Trait.EVEN_ORDER in traits:
            traits.add(Trait.INFINITE_COH_DIM)
        object.__setattr__(self, "traits", frozenset(traits))
        object.__setattr__(self, "facts", tuple(self.facts))

    def has(self, trait: Trait) -> bool:
        return trait in self.traits


Z2 = GroupProfile("Z2", frozenset({Trait.IS_Z2}))
Q8 = GroupProfile("Q8", frozenset({Trait.IS_Q8}))
GENERIC_EVEN = GroupProfile("generic-even", frozenset({Trait.EVEN_ORDER}))
GENERIC = GroupProfile("generic", frozenset({Trait.INFINITE_COH_DIM}))
PROFILES = {p.name: p for p in (Z2, Q8, GENERIC_EVEN, GENERIC)}


@dataclass(frozen=True)
class Entry:
    lower: int
    upper: int
    lower_tags: tuple[str, ...] = ()
    upper_tags: tuple[str, ...] = ()

    @property
    def provenance(self) -> tuple[str, ...]:
        return tuple(f"lower:{t}" for t in self.lower_tags) + tuple(f"upper:{t}" for t in self.upper_tags)


@dataclass(frozen=True)
class BoundTable:
    profile: GroupProfile
    r: int
    entries: tuple[Entry, ...]
    closed: bool = False

    @property
    def n_max(self) -> int:
        return len(self.entries)

    def entry(self, n: int) -> Entry:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside 1..{self.n_max}")
        return self.entries[n - 1]

    def lower(self, n: int) -> int:
        return self.entry(n).lower

    def upper(self, n: int) -> int:
        return self.entry(n).upper

    def bounds(self) -> list[tuple[int, int]]:
        return [(e.lower, e.upper) for e in self.entries]


def _add_tag(tags: tuple[str, ...], tag: str) -> tuple[str, ...]:
    return tags if tag in tags else tuple(sorted(tags + (tag,)))


def _raise_lower(e: Entry, value: int, tag: str) -> Entry:
    if value > e.lower:
        return replace(e, lower=value, lower_tags=(tag,))
    if value == e.lower:
        return replace(e, lower_tags=_add_tag(e.lower_tags, tag))
    return e


def _lower_upper(e: Entry, value: int, tag: str) -> Entry:
    if value < e.upper:
        return replace(e, upper=value, upper_tags=(tag,))
    if value == e.upper:
        return replace(e, upper_tags=_add_tag(e.upper_tags, tag))
    return e


def _check(n: int, e: Entry) -> Entry:
    if e.lower > e.upper:
        raise ContradictionError(n, e.lower, e.upper, e.lower_tags, e.upper_tags)
    return e


class _Edit:
    """Mutable scratch copy of a table's entries; ``done`` freezes it again."""

    def __init__(self, table: BoundTable):
        self.table = table
        self.entries = list(table.entries)

    def raise_lower(self, n: int, value: int, tag: str) -> None:
        self.entries[n - 1] = _check(n, _raise_lower(self.entries[n - 1], value, tag))

    def lower_upper(self, n: int, value: int, tag: str) -> None:
        self.entries[n - 1] = _check(n, _lower_upper(self.entries[n - 1], value, tag))

    def done(self) -> BoundTable:
        return replace(self.table, entries=tuple(self.entries), closed=False)


def base_bounds(profile: GroupProfile, n_max: int, r: int = 2) -> BoundTable:
    """``n <= TC^n_r(G) <= r n`` for groups of infinite cohomological dimension."""
    if not profile.has(Trait.INFINITE_COH_DIM):
        raise ValueError(f"profile {profile.name!r} lacks InfiniteCohDim; the base bounds need it")
    if n_max < 1 or r < 2:
        raise ValueError(f"need n_max >= 1 and r >= 2, got n_max={n_max}, r={r}")
    entries = tuple(Entry(n, r * n, ("cat/dim",), ("cat/dim",)) for n in range(1, n_max + 1))
    return BoundTable(profile=profile, r=r, entries=entries)


def _require(table: BoundTable, trait: Trait, rule: str) -> None:
    if table.r != 2:
        raise ValueError(f"{rule} applies to r = 2 only, table has r = {table.r}")
    if not table.profile.has(trait):
        raise ValueError(f"{rule} needs a {trait.value} profile, got {table.profile.name!r}")


def apply_davis(table: BoundTable, k_max: int, k_min: int = 1) -> BoundTable:
    """``TC^dim(Z2) >= 4k - 2α(k) + 1`` at ``dim = 2(k + α(k) - 1)``, for ``k_min <= k <= k_max``."""
    _require(table, Trait.IS_Z2, "davis")
    edit = _Edit(table)
    for k in range(k_min, k_max + 1):
        if 2 * k > table.n_max + 2:
            break  # dim >= 2k from here on
        pair = davis_pair(k)
        if pair.dim <= table.n_max:
            edit.raise_lower(pair.dim, pair.strict_lower + 1, f"davis(k={k})")
    return edit.done()


def apply_z2_transfer(target: BoundTable, z2: BoundTable) -> BoundTable:
    """``TC^n(Z2) <= TC^n(G)`` for every group of even order."""
    _require(target, Trait.EVEN_ORDER, "z2-transfer")
    _require(z2, Trait.IS_Z2, "z2-transfer source")
    edit = _Edit(target)
    for n in range(1, min(target.n_max, z2.n_max) + 1):
        edit.raise_lower(n, z2.lower(n), "z2-transfer")
    return edit.done()


def apply_q8_rule(table: BoundTable, certificates: Iterable = (), k_max: int | None = None, k_min: int = 0) -> BoundTable:
    """``TC^(2^k+2)(Q8) >= 2^(k+1) + 2`` for ``k_min <= k <= k_max``.

    An application is tagged ``certified`` when a passing ring certificate
    for that ``k`` is supplied, ``stated`` otherwise. ``k = 0, 1`` are never
    certified (the certificate needs ``k >= 2``) and log a warning.
    """
    _require(table, Trait.IS_Q8, "q8-weight")
    certified = {c.k for c in certificates if c.passed}
    edit = _Edit(table)
    k = k_min
    while (1 << k) + 2 <= table.n_max and (k_max is None or k <= k_max):
        status = "certified" if k in certified else "stated"
        if status == "stated" and k <= 1:
            log.warning("applying the Q8 rule at k=%d without a ring certificate", k)
        edit.raise_lower((1 << k) + 2, (1 << (k + 1)) + 2, f"q8-weight(k={k}, {status})")
        k += 1
    return edit.done()


def ingest_facts(table: BoundTable, facts: Iterable[IngestedFact]) -> BoundTable:
    """Tighten bounds with literature values; facts beyond ``n_max`` are ignored."""
    edit = _Edit(table)
    for fact in facts:
        if fact.r != table.r:
            raise ValueError(f"fact {fact} has r={fact.r}, table has r={table.r}")
        if fact.group != table.profile.name:
            raise ValueError(f"fact for group {fact.group!r} given to a {table.profile.name!r} table")
        if fact.n > table.n_max:
            log.debug("ignoring fact beyond n_max: %s", fact)
            continue
        if fact.kind in ("exact", "lower"):
            edit.raise_lower(fact.n, fact.value, fact.source)
        if fact.kind in ("exact", "upper"):
            edit.lower_upper(fact.n, fact.value, fact.source)
    return edit.done()


def monotone_closure(table: BoundTable) -> BoundTable:
    """Propagate weak monotonicity of ``n -> TC^n(G)``.

    Lower bounds are carried forward (running maximum), upper bounds
    backward (running minimum). Only valid for ``r = 2``.
    """
    if table.r != 2:
        raise ValueError("monotone closure is only justified for r = 2")
    if not table.profile.has(Trait.INFINITE_COH_DIM):
        raise ValueError("monotone closure needs an InfiniteCohDim profile")
    entries = list(table.entries)
    best, best_n = -1, 0
    for idx, e in enumerate(entries):
        n = idx + 1
        if e.lower > best:
            best, best_n = e.lower, n
        elif e.lower < best:
            entries[idx] = _check(n, replace(e, lower=best, lower_tags=(f"monotone(from n={best_n})",)))
    best, best_n = None, 0
    for idx in range(len(entries) - 1, -1, -1):
        n = idx + 1
        e = entries[idx]
        if best is None or e.upper < best:
            best, best_n = e.upper, n
        elif e.upper > best:
            entries[idx] = _check(n, replace(e, upper=best, upper_tags=(f"monotone(from n={best_n})",)))
    return replace(table, entries=tuple(entries), closed=True)


@dataclass(frozen=True)
class GrowthInterval:
    """Bounds on ``alpha_G^r(m) = #{k >= 1 : TC^k_r(G) <= m}``."""

    m: int
    lower: int
    upper: int
    provenance: tuple[str, ...] = field(default=())


def growth_interval(table: BoundTable, m: int) -> GrowthInterval:
    """Count indices ``k <= m`` certainly (``upper[k] <= m``) or possibly (``lower[k] <= m``) counted.

    Indices above ``m`` never count because ``TC^k_r(G) >= k``.
    """
    if not 1 <= m <= table.n_max:
        raise ValueError(f"m={m} outside the table range 1..{table.n_max}")
    if table.r == 2 and not table.closed:
        raise ValueError("r = 2 tables must be monotone-closed before counting")
    lo = hi = 0
    tags: set[str] = set()
    for e in table.entries[:m]:
        if e.upper <= m:
            lo += 1
        if e.lower <= m:
            hi += 1
        else:
            tags.update(e.lower_tags)
    return GrowthInterval(m=m, lower=lo, upper=hi, provenance=tuple(sorted(tags)))


def growth_series(table: BoundTable, m_max: int | None = None) -> list[GrowthInterval]:
    """The counts of :func:`growth_interval` for every ``m <= m_max`` in one pass.

    Provenance is left empty; use :func:`growth_interval` for it.
    """
    m_max = table.n_max if m_max is None else m_max
    if not 1 <= m_max <= table.n_max:
        raise ValueError(f"m_max={m_max} outside the table range 1..{table.n_max}")
    if table.r == 2 and not table.closed:
        raise ValueError("r = 2 tables must be monotone-closed before counting")
    # index k counts for m exactly when m >= max(k, bound[k])
    lo_start = [0] * (m_max + 2)
    hi_start = [0] * (m_max + 2)
    for k, e in enumerate(table.entries[:m_max], 1):
        if max(k, e.upper) <= m_max:
            lo_start[max(k, e.upper)] += 1
        if max(k, e.lower) <= m_max:
            hi_start[max(k, e.lower)] += 1
    out = []
    lo = hi = 0
    for m in range(1, m_max + 1):
        lo += lo_start[m]
        hi += hi_start[m]
        out.append(GrowthInterval(m=m, lower=lo, upper=hi))
    return out


# -- standard pipelines -------------------------------------------------------


def z2_table(n_max: int, facts: Iterable[IngestedFact] = (), k_max: int | None = None) -> BoundTable:
    """Z2: base bounds, Davis pairs, literature facts, closure."""
    table = apply_davis(base_bounds(Z2, n_max, 2), n_max if k_max is None else k_max)
    table = ingest_facts(table, [f for f in facts if f.group == Z2.name and f.r == 2])
    return monotone_closure(table)


def build_table(
    profile: GroupProfile,
    n_max: int,
    r: int = 2,
    facts: Iterable[IngestedFact] = (),
    certificates: Iterable = (),
    davis_k_max: int | None = None,
    q8_k_max: int | None = None,
) -> BoundTable:
    """Apply every rule whose hypotheses the profile meets, then close (r = 2).

    ``facts`` may mix groups; each table only ingests its own. Even-order
    groups receive the Z2 table (built from the same facts) by transfer.
    """
    facts = list(facts)
    table = base_bounds(profile, n_max, r)
    if r == 2:
        if profile.has(Trait.IS_Z2):
            table = apply_davis(table, n_max if davis_k_max is None else davis_k_max)
        elif profile.has(Trait.EVEN_ORDER):
            table = apply_z2_transfer(table, z2_table(n_max, facts, davis_k_max))
        if profile.has(Trait.IS_Q8):
            table = apply_q8_rule(table, certificates, q8_k_max)
    own = [f for f in facts if f.group == profile.name and f.r == r]
    table = ingest_facts(table, own)
    if r == 2:
        table = monotone_closure(table)
    return table


def compare_with_closed_forms(m_max: int, certificates: Iterable = ()) -> Report:
    """Cross-check engine growth bounds for Z2 and Q8 against beta and gamma.

    Asserted for every ``m <= m_max``: the engine interval is nonempty and
    contains ``m // 2`` below its upper end; the Q8 upper end is at most
    ``gamma(m)``, with equality at ``m = 2^(k+1) + 1``. Points where the
    engine is strictly sharper than ``beta`` (Z2, Q8) or ``gamma`` (Q8)
    are listed in ``info``; the engine versus ``beta`` is not asserted.
    """
    from .growth import beta_values

    if m_max < 13:
        raise ValueError("m_max must be >= 13")
    z2 = z2_table(m_max)
    q8 = build_table(Q8, m_max, certificates=certificates)
    bv = beta_values(m_max)
    report = Report(claim_id="engine-closed-forms", checked_range=f"1 <= m <= {m_max}")
    sharper: dict[str, list[int]] = {"Z2<beta": [], "Q8<beta": [], "Q8<gamma": []}
    for name, table in (("Z2", z2), ("Q8", q8)):
        for gi in growth_series(table, m_max):
            m = gi.m
            report.check(gi.lower <= gi.upper, (name, m), "engine lower <= engine upper", (gi.lower, gi.upper))
            report.check(m // 2 <= gi.upper, (name, m), "m//2 <= engine upper", gi.upper)
            if gi.upper < bv[m]:
                sharper[f"{name}<beta"].append(m)
            if name == "Q8":
                g = gamma(m)
                report.check(gi.upper <= g, (name, m), "engine upper <= gamma(m)", (gi.upper, g))
                if gi.upper < g:
                    sharper["Q8<gamma"].append(m)
                if m >= 3 and (m - 1) & (m - 2) == 0:  # m = 2^(k+1) + 1
                    report.check(gi.upper == g, (name, m), "engine upper == gamma(m) at 2^(k+1)+1", (gi.upper, g))
    report.info["sharpness_witnesses"] = sharper
    return report


# -- export ---------------------------------------------------------------------


def _rows(table: BoundTable) -> list[list[str]]:
    return [
        [str(n), str(e.lower), str(e.upper), " ".join(e.lower_tags), " ".join(e.upper_tags)]
        for n, e in enumerate(table.entries, 1)
    ]


TABLE_HEADER = ["n", "lower", "upper", "lower_provenance", "upper_provenance"]


def table_to_csv(table: BoundTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    writer.writerows(_rows(table))
    return buf.getvalue()


def _md_cell(s: str) -> str:
    return s.replace("|", "\\|")


def markdown_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines.extend("| " + " | ".join(_md_cell(c) for c in row) + " |" for row in rows)
    return "\n".join(lines) + "\n"


def table_to_markdown(table: BoundTable) -> str:
    return markdown_table(TABLE_HEADER, _rows(table))
