"""
Parse trees with at most four labels for bi- and trilabeled graphs.

This module provides:
- Piece / Step: a labeled induced subgraph awaiting decomposition, and one
  decomposition step (top operations above a union of parts)
- ``decompose``: the worklist loop replacing pieces by steps until only
  single vertices remain
- The leaf decompositions: trilabeled (universal vertex), bilabeled (PC1,
  PC2, PC3, then the U and D̄ families)
- The exhaustive last-operation search for small pieces no named rule
  settles
- ``build_parse_trees``: decompose every candidate of a LabG

Every step is replayed against the piece it replaces before it is accepted:
joins may add only edges of the host graph between different parts, never
twice, and the replay must restore the piece's edges and labels exactly.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union as TypingUnion

from ..errors import InvariantError, PreconditionError
from ..graphs.core import (
    MAX_LABEL,
    MIN_LABEL,
    Graph,
    LabeledGraph,
    cocomponent_masks,
    component_masks,
    induced_subgraph,
    is_connected,
    is_l_prime,
    iter_bits,
    lowest_bit,
    popcount,
)
from ..kexpr.tree import Join, Leaf, ParseTree, Rename, evaluate, union, wrap
from .labg import CandidateLabeling
from .memo import memo_manager
from .refinement import class_pair_key, refinement_keys, set_key, vertex_order

logger = logging.getLogger(__name__)

OpSpec = Tuple[str, int, int]

DEFAULT_SEARCH_LIMIT = 7


class DecomposeConfig:
    """Configuration for the decomposition worklist."""

    def __init__(self, strict_disjointness: bool = True, use_shared_memo: bool = True, threads: int = 1,
                 search_limit: int = DEFAULT_SEARCH_LIMIT):
        self.strict_disjointness = strict_disjointness
        self.use_shared_memo = use_shared_memo
        self.threads = threads
        # largest piece the exhaustive last-operation search may take on
        self.search_limit = search_limit

    def to_dict(self) -> Dict[str, Any]:
        return {
            "strict_disjointness": self.strict_disjointness,
            "use_shared_memo": self.use_shared_memo,
            "threads": self.threads,
            "search_limit": self.search_limit,
        }


@dataclass(frozen=True)
class DecomposeOutcome:
    """Either a parse tree or the clique-width > 3 verdict."""

    tree: Optional[ParseTree]
    reason: Optional[str] = None

    @property
    def exceeded(self) -> bool:
        return self.tree is None


class Piece:
    """The subgraph of ``graph`` induced on ``scope`` with its current labels."""

    __slots__ = ("graph", "scope", "labels", "_keys")

    def __init__(self, graph: Graph, scope: int, labels: Dict[int, int]):
        self.graph = graph
        self.scope = scope
        self.labels = labels
        self._keys = None

    @property
    def size(self) -> int:
        return popcount(self.scope)

    def vertices(self) -> List[int]:
        return list(iter_bits(self.scope))

    def row(self, v: int) -> int:
        return self.graph.row(v) & self.scope

    def class_mask(self, label: int, labels: Optional[Dict[int, int]] = None) -> int:
        labels = self.labels if labels is None else labels
        mask = 0
        for v, lab in labels.items():
            if lab == label:
                mask |= 1 << v
        return mask

    def labels_in_use(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.labels.values())))

    def keys(self) -> Dict[int, str]:
        if self._keys is None:
            self._keys = refinement_keys(self.graph, self.scope, self.labels)
        return self._keys

    def memo_key(self) -> tuple:
        return self.graph, self.scope, tuple(sorted(self.labels.items()))

    def edge_count(self) -> int:
        return sum(popcount(self.row(v)) for v in iter_bits(self.scope)) // 2

    def components(self, removed: Optional[Dict[int, int]] = None) -> List[int]:
        """Connected components after deleting, for each ``v``, the edges to ``removed[v]``."""
        removed = removed or {}
        comps = []
        remaining = self.scope
        while remaining:
            comp = frontier = remaining & -remaining
            while frontier:
                v = lowest_bit(frontier)
                frontier &= frontier - 1
                fresh = self.row(v) & ~removed.get(v, 0) & ~comp
                comp |= fresh
                frontier |= fresh
            comps.append(comp)
            remaining &= ~comp
        return comps

    def sub(self, mask: int, labels: Optional[Dict[int, int]] = None) -> "Piece":
        labels = self.labels if labels is None else labels
        return Piece(self.graph, mask, {v: labels[v] for v in iter_bits(mask)})

    def as_labeled(self) -> LabeledGraph:
        sub, order = induced_subgraph(self.graph, iter_bits(self.scope))
        return LabeledGraph(sub, [self.labels[v] for v in order])

    def __repr__(self) -> str:
        return f"Piece(size={self.size}, labels={self.labels_in_use()})"


@dataclass
class Step:
    """Top operations (outermost first) above the union of ``parts``."""

    ops: Tuple[OpSpec, ...]
    parts: List[TypingUnion[Piece, "Step"]]
    rule: str

    def pieces(self) -> Iterator[Piece]:
        for part in self.parts:
            if isinstance(part, Step):
                yield from part.pieces()
            else:
                yield part


class _Rejected(Exception):
    pass


class _Replay:
    """Accumulated state of a replay: labels, the leaf piece of each vertex, join-added edges."""

    def __init__(self):
        self.labels: Dict[int, int] = {}
        self.piece_of: Dict[int, int] = {}
        self.added: set = set()
        self.piece_edges = 0


def _replay(graph: Graph, step: Step, state: Optional[_Replay] = None) -> _Replay:
    state = state or _Replay()
    if len(step.parts) < 2:
        raise _Rejected("a step needs at least two parts")
    scope: Dict[int, int] = {}
    for part in step.parts:
        if isinstance(part, Step):
            before = set(state.labels)
            _replay(graph, part, state)
            fresh = [v for v in state.labels if v not in before]
        else:
            fresh = list(part.labels)
            for v in fresh:
                if v in state.labels:
                    raise _Rejected(f"vertex {v} appears in two parts")
                state.piece_of[v] = id(part)
            state.labels.update(part.labels)
            state.piece_edges += part.edge_count()
        for v in fresh:
            scope[v] = state.labels[v]
    for kind, i, j in reversed(step.ops):
        if not (MIN_LABEL <= i <= MAX_LABEL and MIN_LABEL <= j <= MAX_LABEL):
            raise _Rejected(f"label outside {MIN_LABEL}..{MAX_LABEL}")
        if kind == "join":
            side_i = [v for v, lab in scope.items() if lab == i]
            side_j = [v for v, lab in scope.items() if lab == j]
            for u in side_i:
                for w in side_j:
                    if not graph.has_edge(u, w):
                        raise _Rejected(f"join({i},{j}) adds non-edge {u}-{w}")
                    pair = (u, w) if u < w else (w, u)
                    if pair in state.added or state.piece_of[u] == state.piece_of[w]:
                        raise _Rejected(f"join({i},{j}) repeats edge {pair}")
                    state.added.add(pair)
        else:
            for v, lab in scope.items():
                if lab == i:
                    scope[v] = j
    state.labels.update(scope)
    return state


def _fresh(exclude: Iterable[int], count: int = 1) -> Optional[List[int]]:
    taken = set(exclude)
    free = [lab for lab in range(MIN_LABEL, MAX_LABEL + 1) if lab not in taken]
    return free[:count] if len(free) >= count else None


class _Decomposer:
    def __init__(self, config: Optional[DecomposeConfig] = None):
        self.config = config or DecomposeConfig()
        self._memo: Dict[tuple, Optional[ParseTree]] = {}
        self._searched: Dict[tuple, Optional[ParseTree]] = {}
        self._shared = None
        if self.config.use_shared_memo and memo_manager.is_initialized():
            self._shared = memo_manager.get_store()

    # memo

    def _recall(self, piece: Piece) -> Tuple[bool, Optional[ParseTree]]:
        key = piece.memo_key()
        if key in self._memo:
            return True, self._memo[key]
        if self._shared is not None:
            found, tree = self._shared.lookup(key)
            if found:
                self._memo[key] = tree
            return found, tree
        return False, None

    def _remember(self, piece: Piece, tree: Optional[ParseTree]) -> None:
        key = piece.memo_key()
        self._memo[key] = tree
        if self._shared is not None:
            self._shared.store(key, tree)

    # worklist

    def solve(self, root: Piece) -> Optional[ParseTree]:
        found, tree = self._recall(root)
        if found:
            return tree
        plans: Dict[int, TypingUnion[ParseTree, Step]] = {}
        pending = [root]
        while pending:
            piece = pending.pop()
            found, tree = self._recall(piece)
            if found:
                if tree is None:
                    return self._settle(root)
                plans[id(piece)] = tree
                continue
            plan = self.plan(piece)
            if plan is None:
                plan = self.search(piece)
            if plan is None:
                logger.debug(f"No decomposition for {piece}")
                self._remember(piece, None)
                return self._settle(root)
            plans[id(piece)] = plan
            if isinstance(plan, Step):
                pending.extend(plan.pieces())
        tree = self._assemble(root, plans)
        self._remember(root, tree)
        return tree

    def _settle(self, root: Piece) -> Optional[ParseTree]:
        """A committed step left a dead part: search the root itself instead."""
        tree = self.search(root)
        self._remember(root, tree)
        return tree

    def _assemble(self, part: TypingUnion[Piece, Step], plans: Dict[int, Any]) -> ParseTree:
        if isinstance(part, Piece):
            plan = plans[id(part)]
            if not isinstance(plan, Step):
                return plan
            part = plan
        children = [self._assemble(child, plans) for child in part.parts]
        return wrap(part.ops, union(*children))

    def plan(self, piece: Piece) -> TypingUnion[ParseTree, Step, None]:
        if piece.size == 1:
            v = lowest_bit(piece.scope)
            return Leaf(v, piece.labels[v], piece.graph.name(v))
        comps = piece.components()
        if len(comps) > 1:
            return Step((), [piece.sub(c) for c in comps], "union")
        used = piece.labels_in_use()
        if piece.size <= 3:
            return self.base(piece)
        if len(used) >= 3:
            return self.trilabeled(piece)
        if len(used) == 2:
            return self.bilabeled(piece)
        return self.peel(piece)

    # step construction

    def propose(self, piece: Piece, work: Dict[int, int], ops: Sequence[OpSpec], rule: str) -> Step:
        """Parts are the components left after deleting every edge the ops would add."""
        labels = dict(work)
        removed: Dict[int, int] = {}
        for kind, i, j in reversed(ops):
            if kind == "join":
                side_i = piece.class_mask(i, labels)
                side_j = piece.class_mask(j, labels)
                for u in iter_bits(side_i):
                    removed[u] = removed.get(u, 0) | side_j
                for w in iter_bits(side_j):
                    removed[w] = removed.get(w, 0) | side_i
            else:
                for v, lab in labels.items():
                    if lab == i:
                        labels[v] = j
        comps = piece.components(removed)
        return Step(tuple(ops), [piece.sub(c, work) for c in comps], rule)

    def accept(self, piece: Piece, step: Step) -> Optional[Step]:
        try:
            state = _replay(piece.graph, step)
        except _Rejected as e:
            logger.debug(f"Rejected {step.rule} on {piece}: {e}")
            return None
        if state.labels != piece.labels or state.piece_edges + len(state.added) != piece.edge_count():
            logger.debug(f"Rejected {step.rule} on {piece}: replay does not restore the piece")
            return None
        logger.debug(f"Step {step.rule} on {piece}: ops={list(step.ops)}, parts={len(step.parts)}")
        return step

    def _try(self, piece: Piece, work: Dict[int, int], ops: Sequence[OpSpec], rule: str) -> Optional[Step]:
        return self.accept(piece, self.propose(piece, work, ops, rule))

    # generic rules

    def base(self, piece: Piece) -> Optional[Step]:
        return self.complete_pair(piece) or self.peel(piece)

    def complete_pair(self, piece: Piece) -> Optional[Step]:
        used = piece.labels_in_use()
        keys = piece.keys()
        pairs = []
        for index, a in enumerate(used):
            for b in used[index + 1:]:
                side_a, side_b = piece.class_mask(a), piece.class_mask(b)
                if all(piece.row(v) & side_b == side_b for v in iter_bits(side_a)):
                    pairs.append((class_pair_key(keys, list(iter_bits(side_a)), list(iter_bits(side_b))), a, b))
        for _, a, b in sorted(pairs):
            step = self._try(piece, piece.labels, [("join", a, b)], "complete-pair")
            if step is not None:
                return step
        return None

    def peel(self, piece: Piece, candidates: Optional[Iterable[int]] = None, rule: str = "peel") -> Optional[Step]:
        """Detach one vertex whose neighbourhood is a union of label classes of the rest."""
        keys = piece.keys()
        order = vertex_order(keys, piece.vertices() if candidates is None else candidates)
        for x in order:
            step = self._peel_vertex(piece, x, rule)
            if step is not None:
                return step
        return None

    def _peel_vertex(self, piece: Piece, x: int, rule: str) -> Optional[Step]:
        own = piece.labels[x]
        rest = piece.scope & ~(1 << x)
        rest_labels = sorted({piece.labels[v] for v in iter_bits(rest)})
        nbrs = piece.row(x)
        targets = []
        for c in rest_labels:
            cls = piece.class_mask(c) & rest
            seen = nbrs & cls
            if seen == cls:
                targets.append(c)
            elif seen:
                return None
        if not targets:
            return None
        if own not in rest_labels:
            ops = [("join", own, c) for c in reversed(targets)]
            return self._try(piece, piece.labels, ops, rule)
        fresh = _fresh(set(rest_labels) | {own})
        if fresh is None:
            return None
        f = fresh[0]
        work = dict(piece.labels)
        work[x] = f
        ops = [("ren", f, own)] + [("join", f, c) for c in reversed(targets)]
        return self._try(piece, work, ops, rule)

    # trilabeled

    def trilabeled(self, piece: Piece) -> Optional[Step]:
        keys = piece.keys()
        universal = [v for v in piece.vertices() if piece.row(v) == piece.scope & ~(1 << v)]
        for x in vertex_order(keys, universal):
            own = piece.labels[x]
            ops = [("join", own, b) for b in piece.labels_in_use() if b != own]
            step = self._try(piece, piece.labels, ops, "TI-universal")
            if step is not None:
                return step
        return None

    # bilabeled

    def bilabeled(self, piece: Piece) -> Optional[Step]:
        l1, l2 = piece.labels_in_use()
        keys = piece.keys()
        l3 = _fresh((l1, l2))[0]

        universal = [v for v in piece.vertices() if piece.row(v) == piece.scope & ~(1 << v)]
        if universal:
            for x in vertex_order(keys, universal):
                work = dict(piece.labels)
                work[x] = l3
                ops = [("ren", l3, piece.labels[x]), ("join", l3, l2), ("join", l3, l1)]
                step = self._try(piece, work, ops, "PC1")
                if step is not None:
                    return step

        step = self.pc2(piece, l1, l2)
        if step is not None:
            return step
        step = self.pc3(piece, l1, l2)
        if step is not None:
            return step

        members = self.memberships(piece, l1, l2, require_l_prime=True)
        for kind, label in members:
            step = self.family_u(piece, label) if kind == "U" else self.family_d(piece, label)
            if step is not None:
                return step
        return None

    def memberships(self, piece: Piece, l1: int, l2: int, require_l_prime: bool = False) -> List[Tuple[str, int]]:
        """
        The U and D̄ families a bilabeled piece belongs to, in trial order.

        Raises:
            InvariantError: In strict mode, when the piece is in more than one
                family (only checked on l-prime pieces if ``require_l_prime``)
        """
        members = []
        for kind, label in (("U", l1), ("U", l2), ("D", l1), ("D", l2)):
            held = _member_u(piece, label) if kind == "U" else _member_d(piece, label)
            if held:
                members.append((kind, label))
        if len(members) < 2:
            return members
        message = f"overlapping memberships {members} on {piece}"
        if require_l_prime and not is_l_prime(piece.as_labeled()):
            logger.debug(message)
        elif self.config.strict_disjointness:
            logger.error(message)
            raise InvariantError(message)
        else:
            logger.warning(message)
        return members

    def _pc2_set(self, piece: Piece, l1: int, l2: int) -> List[Tuple[int, int]]:
        """Vertices universal to one label class and anti to the other, with that class."""
        out = []
        for x in piece.vertices():
            others = piece.scope & ~(1 << x)
            nbrs = piece.row(x)
            for target, other in ((l1, l2), (l2, l1)):
                tcls = piece.class_mask(target) & others
                ocls = piece.class_mask(other) & others
                if tcls and ocls and nbrs & tcls == tcls and nbrs & ocls == 0:
                    out.append((x, target))
        return out

    def pc2(self, piece: Piece, l1: int, l2: int) -> Optional[Step]:
        found = self._pc2_set(piece, l1, l2)
        if not found:
            return None
        keys = piece.keys()
        found.sort(key=lambda item: (keys[item[0]], item[0]))
        if len(found) > 2:
            if is_l_prime(piece.as_labeled()):
                raise InvariantError(f"PC2 found {len(found)} vertices in an l-prime piece")
            return None
        l3, l4 = _fresh((l1, l2), 2)
        if len(found) == 2 and found[0][1] != found[1][1]:
            for (x1, t1), (x2, t2) in (found, found[::-1]):
                work = dict(piece.labels)
                work[x1], work[x2] = l3, l4
                ops = [("ren", l4, piece.labels[x2]), ("join", l4, t2),
                       ("ren", l3, piece.labels[x1]), ("join", l3, t1)]
                step = self._try(piece, work, ops, "PC2-pair")
                if step is not None:
                    return step
        for x, target in found:
            work = dict(piece.labels)
            work[x] = l3
            step = self._try(piece, work, [("ren", l3, piece.labels[x]), ("join", l3, target)], "PC2")
            if step is not None:
                return step
        return None

    def pc3(self, piece: Piece, l1: int, l2: int) -> Optional[Step]:
        keys = piece.keys()
        l3 = _fresh((l1, l2))[0]
        pairs = []
        for y in piece.vertices():
            missing = piece.scope & ~piece.graph.closed_row(y)
            if popcount(missing) != 1:
                continue
            x = lowest_bit(missing)
            lab = piece.labels[y]
            if piece.labels[x] != lab:
                continue
            other = l2 if lab == l1 else l1
            same = piece.class_mask(lab) & ~(1 << x) & ~(1 << y)
            if piece.row(x) & same == same and piece.row(x) & piece.class_mask(other) == 0:
                pairs.append(((keys[y], keys[x], y, x), x, y, lab, other))
        for _, x, y, lab, other in sorted(pairs):
            work = dict(piece.labels)
            work[x] = work[y] = l3
            outer = self.propose(piece, work, [("ren", l3, lab), ("join", l3, lab)], "PC3")
            for index, part in enumerate(outer.parts):
                if isinstance(part, Piece) and part.scope >> y & 1:
                    outer.parts[index] = self.propose(part, part.labels, [("join", l3, other)], "PC3-inner")
            step = self.accept(piece, outer)
            if step is not None:
                return step
        return None

    def family_u(self, piece: Piece, label: int) -> Optional[Step]:
        other = _other_label(piece, label)
        l3 = _fresh((label, other))[0]
        va, vs, _ = _partition(piece, label)
        comps = component_masks(piece.graph, piece.class_mask(label))
        non_partial = [c for c in comps if c & vs == 0]
        if non_partial:
            chosen = 0
            for comp in non_partial:
                trial = piece.sub(comp, {v: (l3 if va >> v & 1 else label) for v in iter_bits(comp)})
                if self.solve(trial) is not None:
                    chosen |= comp & va
            if not chosen:
                return None
        else:
            chosen = va
        work = {v: (l3 if chosen >> v & 1 else lab) for v, lab in piece.labels.items()}
        return self._try(piece, work, [("ren", l3, label), ("join", l3, other)], f"U{label}")

    def family_d(self, piece: Piece, label: int) -> Optional[Step]:
        other = _other_label(piece, label)
        l3 = _fresh((label, other))[0]
        keys = piece.keys()
        cccs = sorted(cocomponent_masks(piece.graph, piece.class_mask(label)),
                      key=lambda c: set_key(keys, iter_bits(c)))
        ops = [("ren", l3, label), ("join", l3, label)]

        def relabel(mask: int) -> Dict[int, int]:
            return {v: (l3 if mask >> v & 1 else lab) for v, lab in piece.labels.items()}

        if len(cccs) == 2:
            for ccc in cccs:
                step = self._try(piece, relabel(ccc), ops, f"D{label}-two")
                if step is not None:
                    return step

        for side in _proper_partition_sides(piece, label, cccs):
            step = self._try(piece, relabel(side), ops, f"D{label}-partition")
            if step is not None:
                return step

        for ccc in cccs:
            step = self._try(piece, relabel(ccc), ops, f"D{label}-eligible")
            if step is not None and all(self.solve(p) is not None for p in step.pieces()):
                return step
        return None

    # exhaustive search

    def search(self, piece: Piece) -> Optional[ParseTree]:
        """
        Find a tree for ``piece`` by trying every last operation.

        Joins of two completely adjacent label classes are tried first, then
        renames that move part of a class onto a free label. Choices follow
        the refinement keys of ``piece``. Pieces larger than the configured
        limit are left alone.
        """
        if piece.size > self.config.search_limit:
            return None
        rows = {v: piece.row(v) for v in iter_bits(piece.scope)}
        tree = self._search(piece.graph, piece.keys(), piece.scope, dict(piece.labels), rows)
        if tree is not None:
            logger.debug(f"Search found a tree for {piece}")
        return tree

    def _search(self, graph: Graph, keys: Dict[int, Any], scope: int, labels: Dict[int, int],
                rows: Dict[int, int]) -> Optional[ParseTree]:
        key = (graph, scope, tuple(sorted(labels.items())), tuple(sorted(rows.items())))
        if key in self._searched:
            return self._searched[key]
        self._searched[key] = None
        tree = self._search_step(graph, keys, scope, labels, rows)
        self._searched[key] = tree
        return tree

    def _search_step(self, graph: Graph, keys: Dict[int, Any], scope: int, labels: Dict[int, int],
                     rows: Dict[int, int]) -> Optional[ParseTree]:
        if popcount(scope) == 1:
            v = lowest_bit(scope)
            return Leaf(v, labels[v], graph.name(v))
        comps = _row_components(scope, rows)
        if len(comps) > 1:
            children = []
            for comp in comps:
                child = self._search(graph, keys, comp, {v: labels[v] for v in iter_bits(comp)},
                                     {v: rows[v] & comp for v in iter_bits(comp)})
                if child is None:
                    return None
                children.append(child)
            return union(*children)

        classes: Dict[int, int] = {}
        for v, lab in labels.items():
            classes[lab] = classes.get(lab, 0) | 1 << v
        used = sorted(classes)

        pairs = []
        for index, a in enumerate(used):
            for b in used[index + 1:]:
                side_a, side_b = classes[a], classes[b]
                if all(rows[v] & side_b == side_b for v in iter_bits(side_a)):
                    pairs.append((class_pair_key(keys, list(iter_bits(side_a)), list(iter_bits(side_b))), a, b))
        for _, a, b in sorted(pairs):
            side_a, side_b = classes[a], classes[b]
            rest = {v: row & ~(side_b if side_a >> v & 1 else side_a if side_b >> v & 1 else 0)
                    for v, row in rows.items()}
            child = self._search(graph, keys, scope, labels, rest)
            if child is not None:
                return Join(a, b, child)

        fresh = _fresh(used)
        if fresh is None:
            return None
        f = fresh[0]
        splits = []
        for c in used:
            # the lowest member keeps c; the moved part is any non-empty subset of the others
            movable = classes[c] & (classes[c] - 1)
            part = movable
            while part:
                splits.append((set_key(keys, iter_bits(part)), c, part))
                part = (part - 1) & movable
        for _, c, part in sorted(splits):
            moved = {v: (f if part >> v & 1 else lab) for v, lab in labels.items()}
            child = self._search(graph, keys, scope, moved, rows)
            if child is not None:
                return Rename(f, c, child)
        return None


def _row_components(scope: int, rows: Dict[int, int]) -> List[int]:
    comps = []
    remaining = scope
    while remaining:
        comp = frontier = remaining & -remaining
        while frontier:
            v = lowest_bit(frontier)
            frontier &= frontier - 1
            fresh = rows[v] & ~comp
            comp |= fresh
            frontier |= fresh
        comps.append(comp)
        remaining &= ~comp
    return comps


def _other_label(piece: Piece, label: int) -> int:
    a, b = piece.labels_in_use()
    return b if a == label else a


def _partition(piece: Piece, label: int) -> Tuple[int, int, int]:
    other = piece.class_mask(_other_label(piece, label))
    va = vs = vn = 0
    for v in iter_bits(piece.class_mask(label)):
        seen = piece.row(v) & other
        if seen == other:
            va |= 1 << v
        elif seen:
            vs |= 1 << v
        else:
            vn |= 1 << v
    return va, vs, vn


def _member_u(piece: Piece, label: int) -> bool:
    va, _, _ = _partition(piece, label)
    if not va:
        return False
    other = piece.class_mask(_other_label(piece, label))
    removed: Dict[int, int] = {}
    for u in iter_bits(va):
        removed[u] = other
    for w in iter_bits(other):
        removed[w] = va
    return len(piece.components(removed)) > 1


def _inter_ccc_removal(piece: Piece, label: int, cccs: List[int]) -> Dict[int, int]:
    cls = piece.class_mask(label)
    removed: Dict[int, int] = {}
    for ccc in cccs:
        for u in iter_bits(ccc):
            removed[u] = cls & ~ccc
    return removed


def _member_d(piece: Piece, label: int) -> bool:
    cccs = cocomponent_masks(piece.graph, piece.class_mask(label))
    if len(cccs) < 2:
        return False
    return len(piece.components(_inter_ccc_removal(piece, label, cccs))) > 1


def _proper_partition_sides(piece: Piece, label: int, cccs: List[int]) -> List[int]:
    """
    Groups of coconnected components that share a block once the inter-component
    edges are gone; each group's label class is a candidate relabel side.
    """
    if len(cccs) < 2:
        return []
    blocks = piece.components(_inter_ccc_removal(piece, label, cccs))
    parent = list(range(len(cccs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for block in blocks:
        touching = [i for i, ccc in enumerate(cccs) if ccc & block]
        for i in touching[1:]:
            parent[find(i)] = find(touching[0])
    groups: Dict[int, int] = {}
    for i, ccc in enumerate(cccs):
        groups[find(i)] = groups.get(find(i), 0) | ccc
    if len(groups) < 2:
        return []
    keys = piece.keys()
    other = piece.class_mask(_other_label(piece, label))
    reach = {g: 0 for g in groups}
    for block in blocks:
        for g, mask in groups.items():
            if block & mask:
                reach[g] |= block
    ordered = sorted(groups, key=lambda g: (reach[g] & other == 0, set_key(keys, iter_bits(reach[g]))))
    return [groups[g] for g in ordered]


def _piece_of(a: LabeledGraph) -> Piece:
    return Piece(a.graph, a.graph.full_mask, {v: a.labels[v] for v in a.graph.vertices()})


def _check_preconditions(a: LabeledGraph, label_counts: Sequence[int] = (2, 3)) -> None:
    if a.n < 1:
        raise PreconditionError("decomposition needs at least one vertex")
    if a.n == 1:
        return
    if not is_connected(a.graph):
        raise PreconditionError("decomposition needs a connected labeled graph")
    if len(a.labels_in_use()) not in label_counts:
        raise PreconditionError(f"expected {' or '.join(map(str, label_counts))} labels, got {a.labels_in_use()}")
    if not is_l_prime(a):
        raise PreconditionError("decomposition needs an l-prime labeled graph")


def decompose(a: LabeledGraph, check_preconditions: bool = True,
              config: Optional[DecomposeConfig] = None) -> DecomposeOutcome:
    """
    Find a parse tree with at most four labels that evaluates to ``a``.

    Args:
        a: Connected, l-prime, bi- or trilabeled graph
        check_preconditions: Validate the input first
        config: Decomposition settings

    Returns:
        DecomposeOutcome with the tree, or with ``exceeded`` set when no
        decomposition exists

    Raises:
        PreconditionError: If ``check_preconditions`` and ``a`` is outside the domain
        InvariantError: If an accepted tree does not evaluate back to ``a``
    """
    if check_preconditions:
        _check_preconditions(a)
    tree = _Decomposer(config).solve(_piece_of(a))
    if tree is None:
        return DecomposeOutcome(None, "clique-width > 3")
    if evaluate(tree) != a:
        logger.error(f"Decomposition of {a} does not evaluate back to the input")
        raise InvariantError("parse tree does not evaluate to its input")
    return DecomposeOutcome(tree)


def decompose_leaf_TI(a: LabeledGraph, config: Optional[DecomposeConfig] = None) -> Optional[Step]:
    """One trilabeled step: a universal vertex's joins, else a complete label pair."""
    _check_preconditions(a, (3,))
    return _Decomposer(config).trilabeled(_piece_of(a))


def decompose_leaf_BI(a: LabeledGraph, config: Optional[DecomposeConfig] = None) -> Optional[Step]:
    """One bilabeled step: PC1, PC2, PC3, then the U and D̄ families."""
    _check_preconditions(a, (2,))
    return _Decomposer(config).bilabeled(_piece_of(a))


def family_memberships(a: LabeledGraph, config: Optional[DecomposeConfig] = None) -> List[Tuple[str, int]]:
    """
    Every ``("U" | "D", label)`` family a bilabeled graph belongs to.

    Raises:
        PreconditionError: If ``a`` is not bilabeled
        InvariantError: If it belongs to more than one family in strict mode
    """
    if len(a.labels_in_use()) != 2:
        raise PreconditionError(f"family_memberships needs a bilabeled graph, got labels {a.labels_in_use()}")
    l1, l2 = a.labels_in_use()
    return _Decomposer(config).memberships(_piece_of(a), l1, l2)


def membership_U(a: LabeledGraph, label: int) -> bool:
    if len(a.labels_in_use()) != 2 or label not in a.labels_in_use():
        raise PreconditionError(f"membership_U needs a bilabeled graph using label {label}")
    return _member_u(_piece_of(a), label)


def decompose_leaf_U(a: LabeledGraph, label: int, config: Optional[DecomposeConfig] = None) -> Optional[Step]:
    if not membership_U(a, label):
        return None
    return _Decomposer(config).family_u(_piece_of(a), label)


def membership_D(a: LabeledGraph, label: int) -> bool:
    if len(a.labels_in_use()) != 2 or label not in a.labels_in_use():
        raise PreconditionError(f"membership_D needs a bilabeled graph using label {label}")
    return _member_d(_piece_of(a), label)


def decompose_leaf_D(a: LabeledGraph, label: int, config: Optional[DecomposeConfig] = None) -> Optional[Step]:
    if not membership_D(a, label):
        return None
    return _Decomposer(config).family_d(_piece_of(a), label)


def build_parse_trees(cands: Sequence[CandidateLabeling],
                      config: Optional[DecomposeConfig] = None) -> List[ParseTree]:
    """Parse trees of every candidate that decomposes, in candidate order."""
    config = config or DecomposeConfig()

    def attempt(cand: CandidateLabeling) -> Optional[ParseTree]:
        return decompose(cand.graph, check_preconditions=False, config=config).tree

    if config.threads > 1 and len(cands) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            trees = list(pool.map(attempt, cands))
    else:
        trees = [attempt(c) for c in cands]
    found = [t for t in trees if t is not None]
    logger.debug(f"Parse trees: {len(found)} of {len(cands)} candidates decomposed")
    return found
