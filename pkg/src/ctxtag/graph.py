"""Co-occurrence graph over context entities and random-walk significance.

Context documents contribute each of their reserved entities once, so an edge
weight counts the documents where two entities appear together. Significance
is the stationary score of a damped walk on the row-normalized graph: with
damping ``alpha`` and uniform restart mass ``(1 - alpha) / n``, scores update

    s_k = alpha * W_norm^T s_{k-1} + (1 - alpha) / n

until the L1 change drops below ``tol``. Rows with no outgoing weight spread
uniformly. The fixed point is unique for 0 < alpha < 1, so the iterate and a
direct linear solve agree to numerical precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Gazetteer, Lexicon
from .entity import extract_from_text
from .retrieval import SameContextResource

log = logging.getLogger(__name__)

# Entities worth keeping as graph vertices carry at least one of these labels.
RESERVED_POS = frozenset({"noun", "adjective", "verb"})

DEFAULT_ALPHA = 0.85
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class ContextDocument:
    doc_id: str
    entities: frozenset[str]


@dataclass(frozen=True, eq=False)
class CooccurrenceGraph:
    """Symmetric document co-occurrence counts over sorted entity vertices."""

    vertices: tuple[str, ...]
    weights: np.ndarray

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, vertex: str) -> int:
        return self.vertices.index(vertex)


@dataclass(frozen=True, eq=False)
class ScoreVector:
    scores: np.ndarray
    iteration_count: int
    residual: float
    converged: bool


def build_context(
    resources: Sequence[SameContextResource],
    gazetteer: Gazetteer,
    lexicon: Lexicon,
) -> list[ContextDocument]:
    """Reduce each resource to its deduplicated set of reserved entities."""
    documents = []
    for resource in resources:
        entities = extract_from_text(
            resource.doc.title + " " + resource.doc.abstract, gazetteer, lexicon
        )
        kept = frozenset(e.folded for e in entities if e.pos & RESERVED_POS)
        documents.append(ContextDocument(resource.doc.url, kept))
    return documents


def build_graph(documents: Sequence[ContextDocument]) -> CooccurrenceGraph:
    """Count, per entity pair, the documents containing both.

    Vertices are sorted lexicographically by folded form; the matrix is
    symmetric with a zero diagonal and each document contributes 0 or 1 to
    any given pair.
    """
    vocabulary = sorted(set().union(*(doc.entities for doc in documents)) if documents else set())
    position = {vertex: i for i, vertex in enumerate(vocabulary)}
    weights = np.zeros((len(vocabulary), len(vocabulary)), dtype=np.int64)
    for doc in documents:
        members = sorted(position[entity] for entity in doc.entities)
        for a_idx, a in enumerate(members):
            for b in members[a_idx + 1 :]:
                weights[a, b] += 1
                weights[b, a] += 1
    return CooccurrenceGraph(tuple(vocabulary), weights)


def row_normalize(graph: CooccurrenceGraph) -> np.ndarray:
    """Row-stochastic weight matrix; all-zero rows become uniform 1/n."""
    if graph.n == 0:
        raise ValueError("empty graph")
    weights = graph.weights.astype(np.float64)
    sums = weights.sum(axis=1)
    dangling = sums == 0.0
    normalized = np.empty_like(weights)
    normalized[dangling] = 1.0 / graph.n
    live = ~dangling
    normalized[live] = weights[live] / sums[live, np.newaxis]
    return normalized


def significance(
    graph: CooccurrenceGraph,
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> ScoreVector:
    """Iterate the damped walk to its stationary entity scores.

    Starts uniform, stops when the L1 step change drops below ``tol`` or
    after ``max_iter`` iterations; running out of iterations is reported via
    the ``converged`` flag, not an error. Scores stay positive and sum to 1.
    """
    if graph.n == 0:
        raise ValueError("empty graph")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be strictly between 0 and 1")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    transition = row_normalize(graph).T
    n = graph.n
    restart = (1.0 - alpha) / n
    scores = np.full(n, 1.0 / n)
    residual = float("inf")
    iterations = 0
    for iterations in range(1, max_iter + 1):
        updated = alpha * (transition @ scores) + restart
        residual = float(np.abs(updated - scores).sum())
        scores = updated
        if residual < tol:
            break
    converged = residual < tol
    if not converged:
        log.warning("significance did not converge in %d iterations", max_iter)
    return ScoreVector(scores, iterations, residual, converged)


def edge_dump(graph: CooccurrenceGraph) -> str:
    """Render edges as ``entity_i<TAB>entity_j<TAB>weight`` lines for debugging."""
    lines = []
    for i in range(graph.n):
        for j in range(i + 1, graph.n):
            weight = int(graph.weights[i, j])
            if weight:
                lines.append(f"{graph.vertices[i]}\t{graph.vertices[j]}\t{weight}")
    return "".join(line + "\n" for line in lines)
