"""Immutable WordNet-like taxonomy: IS-A graph, depths, subsumers, information content.

A taxonomy is a rooted DAG of senses. Sense identifiers follow the
``lemma#pos#index`` convention (e.g. ``bay#n#1``) with pos limited to nouns
and verbs. Each part of speech has a single root: if the input declares
exactly one parentless sense for a pos, that sense is the root; otherwise a
virtual root (``*root*#<pos>#1``) is materialized and adopts every parentless
sense, so any two same-pos senses always share a subsumer.

All derived quantities (depth, longest chain, propagated frequency,
information content) are computed eagerly at construction; instances are
immutable afterwards and safe for concurrent reads.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import IO, Iterable, Iterator, Mapping

from .errors import TaxonomyError

NOUN = "n"
VERB = "v"
VALID_POS = (NOUN, VERB)

#: Relation names treated as horizontal links in lexical chains.
HORIZONTAL_RELATIONS = frozenset({"also", "also-see", "horizontal"})

_VIRTUAL_LEMMA = "*root*"


def sense_pos(sense_id: str) -> str:
    """Part of speech encoded in a ``lemma#pos#index`` identifier."""
    lemma, pos, index = split_sense_id(sense_id)
    return pos


def split_sense_id(sense_id: str) -> tuple[str, str, str]:
    parts = sense_id.rsplit("#", 2)
    if len(parts) != 3 or not all(parts):
        raise TaxonomyError(
            f"invalid sense id {sense_id!r}: expected lemma#pos#index"
        )
    lemma, pos, index = parts
    if pos not in VALID_POS:
        raise TaxonomyError(
            f"invalid sense id {sense_id!r}: pos must be one of {'/'.join(VALID_POS)}"
        )
    if not index.isdigit():
        raise TaxonomyError(f"invalid sense id {sense_id!r}: index must be numeric")
    return lemma, pos, index


def virtual_root_id(pos: str) -> str:
    return f"{_VIRTUAL_LEMMA}#{pos}#1"


@dataclass(frozen=True)
class Sense:
    """One sense: identifier, surface lemmas, gloss, IS-A parents, extra links.

    ``relation_links`` always carries ``hypernym`` and ``hyponym`` entries
    once the sense is part of a :class:`Taxonomy` (derived from the IS-A
    edges); any further relations come from the input verbatim.
    """

    id: str
    lemmas: tuple[str, ...]
    gloss: str
    parents: tuple[str, ...] = ()
    relation_links: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    corpus_count: float = 1.0

    def __post_init__(self) -> None:
        split_sense_id(self.id)
        if not self.lemmas:
            raise TaxonomyError(f"sense {self.id!r} has no lemmas")
        if not (math.isfinite(self.corpus_count) and self.corpus_count >= 0):
            raise TaxonomyError(
                f"sense {self.id!r} has invalid corpus count {self.corpus_count!r}"
            )

    @property
    def pos(self) -> str:
        return self.id.rsplit("#", 2)[1]


class Taxonomy:
    """Validated, immutable sense graph with precomputed structural statistics."""

    def __init__(self, senses: Iterable[Sense]):
        declared = list(senses)
        if not declared:
            raise TaxonomyError("no senses")

        by_id: dict[str, Sense] = {}
        for s in declared:
            if s.id in by_id:
                raise TaxonomyError(f"duplicate sense id {s.id!r}")
            if s.id.rsplit("#", 2)[0] == _VIRTUAL_LEMMA:
                raise TaxonomyError(f"sense id {s.id!r} uses the reserved root lemma")
            by_id[s.id] = s

        for s in declared:
            for parent in s.parents:
                if parent not in by_id:
                    raise TaxonomyError(
                        f"sense {s.id!r} references unknown parent {parent!r}"
                    )
            for rel, targets in s.relation_links.items():
                for target in targets:
                    if target not in by_id:
                        raise TaxonomyError(
                            f"sense {s.id!r} references unknown {rel} target {target!r}"
                        )

        self._roots = self._attach_roots(by_id)
        self._senses = by_id

        children: dict[str, list[str]] = {sid: [] for sid in by_id}
        for s in by_id.values():
            for parent in s.parents:
                children[parent].append(s.id)
        self._children = {sid: tuple(c) for sid, c in children.items()}

        order = self._topological_order()
        self._depth = self._compute_depths(order)
        self._max_depth = self._compute_max_depths(order)
        self._freq = self._propagate_frequencies()
        self._ic = self._compute_information_content()
        self._materialize_links()

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def _attach_roots(by_id: dict[str, Sense]) -> tuple[str, ...]:
        roots: list[str] = []
        for pos in VALID_POS:
            orphans = [s.id for s in by_id.values() if s.pos == pos and not s.parents]
            pos_senses = [sid for sid in by_id if sense_pos(sid) == pos]
            if not pos_senses:
                continue
            if not orphans:
                raise TaxonomyError(f"no root candidate for pos {pos!r} (cycle?)")
            if len(orphans) == 1:
                roots.append(orphans[0])
                continue
            root_id = virtual_root_id(pos)
            by_id[root_id] = Sense(
                id=root_id,
                lemmas=(_VIRTUAL_LEMMA,),
                gloss="",
                parents=(),
                corpus_count=0.0,
            )
            for orphan in orphans:
                by_id[orphan] = replace(by_id[orphan], parents=(root_id,))
            roots.append(root_id)
        return tuple(roots)

    def _topological_order(self) -> list[str]:
        """Parents-before-children order; raises on IS-A cycles."""
        pending = {sid: len(s.parents) for sid, s in self._senses.items()}
        queue = deque(sorted(sid for sid, n in pending.items() if n == 0))
        order: list[str] = []
        while queue:
            sid = queue.popleft()
            order.append(sid)
            for child in self._children[sid]:
                pending[child] -= 1
                if pending[child] == 0:
                    queue.append(child)
        if len(order) != len(self._senses):
            stuck = sorted(sid for sid, n in pending.items() if n > 0)
            raise TaxonomyError(f"cycle detected among senses: {', '.join(stuck)}")
        return order

    def _compute_depths(self, order: list[str]) -> dict[str, int]:
        depth: dict[str, int] = {}
        for sid in order:
            parents = self._senses[sid].parents
            if not parents:
                depth[sid] = 1
            else:
                depth[sid] = 1 + min(depth[p] for p in parents)
        return depth

    def _compute_max_depths(self, order: list[str]) -> dict[str, int]:
        longest: dict[str, int] = {}
        for sid in order:
            parents = self._senses[sid].parents
            longest[sid] = 1 if not parents else 1 + max(longest[p] for p in parents)
        max_depth: dict[str, int] = {}
        for sid, chain in longest.items():
            pos = sense_pos(sid)
            max_depth[pos] = max(max_depth.get(pos, 0), chain)
        return max_depth

    def _propagate_frequencies(self) -> dict[str, float]:
        # freq(c) = sum of corpus counts over c and its distinct descendants;
        # a multi-parent descendant contributes once per ancestor, not once
        # per path.
        freq = {sid: 0.0 for sid in self._senses}
        for sid, sense in self._senses.items():
            if sense.corpus_count == 0.0:
                continue
            for ancestor in self._ancestors(sid):
                freq[ancestor] += sense.corpus_count
        return freq

    def _compute_information_content(self) -> dict[str, float]:
        ic: dict[str, float] = {}
        root_freq = {sense_pos(r): self._freq[r] for r in self._roots}
        for pos, total in root_freq.items():
            if total <= 0:
                raise TaxonomyError(
                    f"zero propagated frequency at the {pos!r} root; "
                    "supply at least one positive corpus count"
                )
        for sid in self._senses:
            p = self._freq[sid] / root_freq[sense_pos(sid)]
            ic[sid] = 0.0 if p >= 1.0 else -math.log(p)
        return ic

    def _materialize_links(self) -> None:
        updated: dict[str, Sense] = {}
        for sid, sense in self._senses.items():
            links = dict(sense.relation_links)
            extra_up = links.get("hypernym", ())
            extra_down = links.get("hyponym", ())
            links["hypernym"] = sense.parents + tuple(
                t for t in extra_up if t not in sense.parents
            )
            links["hyponym"] = self._children[sid] + tuple(
                t for t in extra_down if t not in self._children[sid]
            )
            updated[sid] = replace(sense, relation_links=MappingProxyType(links))
        self._senses = updated

    # -- basic accessors -------------------------------------------------------

    @property
    def senses(self) -> Mapping[str, Sense]:
        return MappingProxyType(self._senses)

    @property
    def roots(self) -> tuple[str, ...]:
        return self._roots

    def __len__(self) -> int:
        return len(self._senses)

    def __contains__(self, sense_id: str) -> bool:
        return sense_id in self._senses

    def __iter__(self) -> Iterator[str]:
        return iter(self._senses)

    def sense(self, sense_id: str) -> Sense:
        try:
            return self._senses[sense_id]
        except KeyError:
            raise TaxonomyError(f"unknown sense id {sense_id!r}") from None

    def related(self, sense_id: str, relation: str) -> tuple[str, ...]:
        """Senses reached from ``sense_id`` by one link of ``relation``.

        ``self`` names the sense itself; ``hypernym``/``hyponym`` follow the
        IS-A structure; anything else looks up the declared link map.
        """
        sense = self.sense(sense_id)
        if relation == "self":
            return (sense_id,)
        return tuple(sense.relation_links.get(relation, ()))

    def horizontal(self, sense_id: str) -> tuple[str, ...]:
        sense = self.sense(sense_id)
        out: list[str] = []
        for rel in sorted(HORIZONTAL_RELATIONS):
            for target in sense.relation_links.get(rel, ()):
                if target not in out:
                    out.append(target)
        return tuple(out)

    # -- structural queries ----------------------------------------------------

    def depth(self, sense_id: str) -> int:
        """Node count on the shortest root-to-sense chain; the root has depth 1."""
        self.sense(sense_id)
        return self._depth[sense_id]

    def max_depth(self, pos: str) -> int:
        """Longest root-to-leaf chain for a pos, counted in nodes."""
        if pos not in self._max_depth:
            raise TaxonomyError(f"no senses with pos {pos!r}")
        return self._max_depth[pos]

    def _ancestors(self, sense_id: str) -> set[str]:
        """The sense itself plus every node reachable via parent links."""
        seen = {sense_id}
        queue = deque([sense_id])
        while queue:
            for parent in self._senses[queue.popleft()].parents:
                if parent not in seen:
                    seen.add(parent)
                    queue.append(parent)
        return seen

    def _upward_distances(self, sense_id: str) -> dict[str, int]:
        """Minimum IS-A edge count from the sense to each of its ancestors."""
        dist = {sense_id: 0}
        queue = deque([sense_id])
        while queue:
            current = queue.popleft()
            for parent in self._senses[current].parents:
                if parent not in dist:
                    dist[parent] = dist[current] + 1
                    queue.append(parent)
        return dist

    def shortest_path_edges(self, a: str, b: str) -> int | None:
        """Minimum IS-A edges between two senses along ancestor-joining paths.

        Returns None when the senses share no ancestor (distinct parts of
        speech, in particular).
        """
        self.sense(a)
        self.sense(b)
        if a == b:
            return 0
        da = self._upward_distances(a)
        db = self._upward_distances(b)
        common = da.keys() & db.keys()
        if not common:
            return None
        return min(da[c] + db[c] for c in common)

    def lcs(self, a: str, b: str) -> str | None:
        """Deepest common subsumer; ties broken by IC, then smallest id."""
        self.sense(a)
        self.sense(b)
        common = self._ancestors(a) & self._ancestors(b)
        if not common:
            return None
        return min(common, key=lambda c: (-self._depth[c], -self._ic[c], c))

    def information_content(self) -> Mapping[str, float]:
        """Per-sense IC table: IC(c) = -ln(freq(c) / freq(root)), IC(root) = 0."""
        return MappingProxyType(self._ic)

    def frequency(self, sense_id: str) -> float:
        self.sense(sense_id)
        return self._freq[sense_id]


def load_taxonomy(source: str | Path | IO[str]) -> Taxonomy:
    """Parse the tab-separated taxonomy format and build a validated Taxonomy.

    One sense per line::

        id <TAB> lemma[,lemma...] <TAB> parent_id[,...]|- <TAB> gloss [<TAB> count [<TAB> rel:target[,target];...]]

    Lines whose first non-blank character is ``#`` are comments (sense ids
    contain ``#``, so there are no inline comments). The count column
    defaults to 1 when absent or blank.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return Taxonomy(_parse_lines(handle))
    return Taxonomy(_parse_lines(source))


def _parse_lines(handle: Iterable[str]) -> list[Sense]:
    senses: list[Sense] = []
    for lineno, raw in enumerate(handle, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            senses.append(_parse_sense_line(line))
        except TaxonomyError as exc:
            raise TaxonomyError(f"line {lineno}: {exc}") from None
    if not senses:
        raise TaxonomyError("no senses")
    return senses


def _parse_sense_line(line: str) -> Sense:
    fields = line.split("\t")
    if not 4 <= len(fields) <= 6:
        raise TaxonomyError(
            f"expected 4-6 tab-separated fields, found {len(fields)}"
        )
    sense_id = fields[0].strip()
    lemmas = tuple(w.strip() for w in fields[1].split(",") if w.strip())
    if not lemmas:
        raise TaxonomyError(f"sense {sense_id!r} has an empty lemma field")
    parent_field = fields[2].strip()
    parents: tuple[str, ...] = ()
    if parent_field and parent_field != "-":
        parents = tuple(p.strip() for p in parent_field.split(",") if p.strip())
    gloss = fields[3].strip()
    count = 1.0
    if len(fields) >= 5 and fields[4].strip():
        try:
            count = float(fields[4])
        except ValueError:
            raise TaxonomyError(f"invalid corpus count {fields[4]!r}") from None
    links: dict[str, tuple[str, ...]] = {}
    if len(fields) == 6 and fields[5].strip():
        for chunk in fields[5].split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            rel, sep, targets = chunk.partition(":")
            if not sep or not rel.strip() or not targets.strip():
                raise TaxonomyError(f"invalid relation spec {chunk!r}")
            links[rel.strip()] = tuple(
                t.strip() for t in targets.split(",") if t.strip()
            )
    return Sense(
        id=sense_id,
        lemmas=lemmas,
        gloss=gloss,
        parents=parents,
        relation_links=links,
        corpus_count=count,
    )
