"""Deterministic capability evaluation over the delegation graph.

A request is accepted when at least one delegation path runs from a statement
issued by a trusted principal down to the subject token with every required
label surviving the scope intersections along the way.  Paths are judged one
at a time; scopes from different paths are never merged, so authority cannot
be assembled from fragments.

Search runs backward from the subject along reverse edges, abandoning any
branch as soon as its accumulated scope no longer contains the requirement.
Intersection only shrinks scopes, so pruning cannot change the verdict.  The
witness reported on accept is the shortest qualifying path, ties broken by
the lexicographic tid sequence, making audits reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import CapabilityGraph, Scope, build_graph, parse_scope
from .resolution import CleanSet
from .tokens import Token, TokenKind

DEFAULT_MAX_DEPTH = 64


@dataclass(frozen=True)
class TrustedPrincipal:
    """An identity the verifier trusts, bounded by a maximum scope.

    Nothing is implicitly trusted for everything: an unconstrained root scope
    is an explicit configuration choice.
    """

    identity: str
    root_scope: Scope


@dataclass(frozen=True)
class Request:
    """What is being asked: subject token, required labels, trust roots."""

    subject_tid: bytes
    required: frozenset[str]
    roots: tuple[TrustedPrincipal, ...]


class Verdict(Enum):
    ACCEPT = "ACCEPT"
    REJECT = "REJECT"


class RejectReason(Enum):
    SUBJECT_NOT_IN_CLEAN_SET = "SUBJECT_NOT_IN_CLEAN_SET"
    NO_ROOTED_PATH = "NO_ROOTED_PATH"
    SCOPE_INSUFFICIENT = "SCOPE_INSUFFICIENT"


@dataclass(frozen=True)
class Witness:
    """One admissible path justifying an accept, with its effective scope."""

    path: tuple[Token, ...]
    effective_scope: Scope
    root: TrustedPrincipal


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    witness: Witness | None = None
    reason: RejectReason | None = None


@dataclass(frozen=True)
class PathEntry:
    root: TrustedPrincipal
    path: tuple[Token, ...]
    effective_scope: Scope


@dataclass(frozen=True)
class PathReport:
    """Bounded enumeration of rooted paths to a subject, for audit queries."""

    entries: tuple[PathEntry, ...]
    truncated: bool


def token_scope(token: Token) -> Scope:
    """The scope a statement asserts about itself; absent purpose means
    unconstrained, for vouches exactly as for attestations."""
    return parse_scope(token.claims.purpose)


def path_scope(root: TrustedPrincipal, path: list[Token] | tuple[Token, ...]) -> Scope:
    """Effective scope of one delegation path ending at the subject.

    Intersects the root scope, the scope of every vouch the path traverses,
    and the subject's own scope constraint.  A zero-length path (the subject
    itself issued by the root) reduces to root scope intersected with the
    subject's scope.

    Raises ValueError unless the nodes form a real chain: every non-terminal
    node must be a vouch whose subject reference commits to the next node's
    (jti, issuer, content hash).
    """
    if not path:
        raise ValueError("path must contain at least the subject node")
    if path[0].claims.iss != root.identity:
        raise ValueError("path is not rooted in the given principal")
    effective = root.root_scope
    for node, nxt in zip(path, path[1:]):
        if node.claims.kind is not TokenKind.VOUCH:
            raise ValueError(f"non-terminal node {node.tid_hex} is not a vouch")
        if node.subject_triple() != (nxt.claims.jti, nxt.claims.iss, nxt.tid_hex):
            raise ValueError(
                f"nodes {node.tid_hex} -> {nxt.tid_hex} are not a delegation edge"
            )
        effective = effective.intersect(token_scope(node))
    return effective.intersect(token_scope(path[-1]))


def _chain_to_subject(graph: CapabilityGraph, start: bytes, subject_tid: bytes) -> tuple[Token, ...]:
    # Out-degree is at most one, so the forward path from any node is unique;
    # it ends at the subject, which may itself have an onward edge.
    path = [graph.nodes[start]]
    tid = start
    while tid != subject_tid:
        tid = graph.edges[tid][0]
        path.append(graph.nodes[tid])
    return tuple(path)


def _backward_depths(
    graph: CapabilityGraph,
    subject_tid: bytes,
    required: frozenset[str] | None,
    max_depth: int,
) -> dict[bytes, int]:
    """Distance (in edges) from each node down to the subject.

    When ``required`` is given, only vouch edges whose scope still covers it
    are traversed -- the early-pruning walk.  Every node has one outgoing
    edge at most, so each node appears at exactly one depth.
    """
    depths = {subject_tid: 0}
    frontier = [subject_tid]
    depth = 0
    while frontier and depth < max_depth:
        depth += 1
        next_frontier = []
        for tid in frontier:
            for voucher_tid in graph.reverse_edges.get(tid, ()):
                if voucher_tid in depths:
                    continue
                if required is not None and not graph.edges[voucher_tid][1].covers(required):
                    continue
                depths[voucher_tid] = depth
                next_frontier.append(voucher_tid)
        frontier = next_frontier
    return depths


def evaluate(clean: CleanSet, request: Request, max_depth: int = DEFAULT_MAX_DEPTH) -> Decision:
    """Decide a capability request against a resolved token set.

    Deterministic in all inputs: same clean set, roots, subject, and
    requirement always produce the same verdict, reason, and witness,
    whatever order the tokens arrived in.
    """
    graph = build_graph(clean)
    subject = graph.nodes.get(request.subject_tid)
    if subject is None:
        return Decision(verdict=Verdict.REJECT, reason=RejectReason.SUBJECT_NOT_IN_CLEAN_SET)

    root_identities = {r.identity for r in request.roots}
    if not any(iss in root_identities for iss in graph.by_issuer):
        return Decision(verdict=Verdict.REJECT, reason=RejectReason.NO_ROOTED_PATH)

    qualifying = [r for r in request.roots if r.root_scope.covers(request.required)]
    accept_depths: dict[bytes, int] = {}
    if qualifying and token_scope(subject).covers(request.required):
        accept_depths = _backward_depths(graph, subject.tid, request.required, max_depth)

    qualifying_identities = {r.identity for r in qualifying}
    starts = [
        tid
        for tid, d in accept_depths.items()
        if graph.nodes[tid].claims.iss in qualifying_identities
    ]
    if starts:
        # Shortest path first; among equally short paths the tid sequences
        # differ at the start node, so smallest start tid is the lex minimum.
        start = min(starts, key=lambda tid: (accept_depths[tid], tid))
        path = _chain_to_subject(graph, start, subject.tid)
        root = next(
            r
            for r in qualifying
            if r.identity == graph.nodes[start].claims.iss
        )
        return Decision(
            verdict=Verdict.ACCEPT,
            witness=Witness(path=path, effective_scope=path_scope(root, path), root=root),
        )

    # No qualifying path: distinguish "no rooted path at all" from "rooted
    # paths exist but none carries the required scope".
    plain_depths = _backward_depths(graph, subject.tid, None, max_depth)
    if any(graph.nodes[tid].claims.iss in root_identities for tid in plain_depths):
        return Decision(verdict=Verdict.REJECT, reason=RejectReason.SCOPE_INSUFFICIENT)
    return Decision(verdict=Verdict.REJECT, reason=RejectReason.NO_ROOTED_PATH)


def enumerate_paths(
    clean: CleanSet,
    request: Request,
    limit: int = 100,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> PathReport:
    """List every rooted path to the subject with its effective scope.

    Ordered by path length then lexicographic tid sequence; one entry per
    (path, matching root) pair, roots in configuration order.  Stops after
    ``limit`` entries and flags the truncation.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    graph = build_graph(clean)
    if request.subject_tid not in graph.nodes:
        return PathReport(entries=(), truncated=False)
    depths = _backward_depths(graph, request.subject_tid, None, max_depth)
    entries: list[PathEntry] = []
    truncated = False
    for tid in sorted(depths, key=lambda t: (depths[t], t)):
        issuer = graph.nodes[tid].claims.iss
        matching = [r for r in request.roots if r.identity == issuer]
        if not matching:
            continue
        path = _chain_to_subject(graph, tid, request.subject_tid)
        for root in matching:
            if len(entries) >= limit:
                truncated = True
                break
            entries.append(
                PathEntry(root=root, path=path, effective_scope=path_scope(root, path))
            )
        if truncated:
            break
    return PathReport(entries=tuple(entries), truncated=truncated)
