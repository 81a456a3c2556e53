"""Triage queries: ranked path retrieval and alert-tree reconstruction.

Trees are tries over stored vertex sequences. A forward tree gathers every
path with a given origin; a backward tree gathers every path with a given
target and consumes the sequences reversed, so deeper nodes are further
back along the attack. A label reached through two different branches
becomes two distinct nodes, which keeps trees cycle-free even though the
underlying graph is not.
"""

from __future__ import annotations

from typing import Literal

from .model import (
    AlertTree,
    EndpointPair,
    PathRecord,
    TreeNode,
    normalize_color,
    threat_score,
)
from .store import AlertStore

Direction = Literal["forward", "backward"]


def retrieve_paths(store: AlertStore, origin: str, target: str) -> list[PathRecord]:
    """Stored paths from origin to target, highest PTS first, ties by vertices."""
    found = store.find_paths_between(origin, target)
    return sorted(found, key=lambda p: (-p.pts, p.vertices))


def build_forward_tree(store: AlertStore, root: str) -> AlertTree:
    """Trie of every stored path that starts at ``root``."""
    return _build_tree(store, root, "forward")


def build_backward_tree(store: AlertStore, root: str) -> AlertTree:
    """Trie of every stored path that ends at ``root``, walked backwards."""
    return _build_tree(store, root, "backward")


def top_trees(store: AlertStore, k: int, direction: Direction = "forward") -> list[AlertTree]:
    """Trees rooted at the k distinct roots of the highest-PTS paths.

    Roots are ranked by the best cached PTS among their paths, ties broken
    by label. Callers should recompute scores first; a stale cache ranks by
    stale values.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    best: dict[str, float] = {}
    for path in store.paths():
        root = path.origin if direction == "forward" else path.target
        score = best.get(root)
        if score is None or path.pts > score:
            best[root] = path.pts
    roots = sorted(best, key=lambda r: (-best[r], r))[:k]
    return [_build_tree(store, root, direction) for root in roots]


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _build_tree(store: AlertStore, root: str, direction: Direction) -> AlertTree:
    if direction == "forward":
        paths = store.find_paths_starting_at(root)
        sequences = [p.vertices for p in paths]
    else:
        paths = store.find_paths_ending_at(root)
        sequences = [tuple(reversed(p.vertices)) for p in paths]
    # Insertion order decides sibling order: best path first, then label.
    order = sorted(range(len(paths)), key=lambda i: (-paths[i].pts, sequences[i]))

    root_node = TreeNode(root)
    children_of: dict[int, dict[str, TreeNode]] = {id(root_node): {}}
    for i in order:
        node = root_node
        for label in sequences[i][1:]:
            index = children_of[id(node)]
            child = index.get(label)
            if child is None:
                child = TreeNode(label, ets=_arc_ets(store, node.label, label, direction))
                node.children.append(child)
                index[label] = child
                children_of[id(child)] = {}
            node = child

    tree = AlertTree(root_node, direction)
    _colorize(tree)
    return tree


def _arc_ets(store: AlertStore, parent: str, child: str, direction: Direction) -> float:
    if direction == "forward":
        pair = EndpointPair(parent, child)
    else:
        pair = EndpointPair(child, parent)
    record = store.endpoint(pair)
    if record is None:
        # insert_path guarantees annotations exist for every stored pair
        raise AssertionError(f"stored path references unknown pair {pair}")
    return threat_score(record.alerts)


def _colorize(tree: AlertTree) -> None:
    """Root stays black; everything else scales black-to-red against the max."""
    nodes = tree.nodes()
    scores = [n.ets for n in nodes if n.ets is not None]
    if not scores:
        tree.root.color = 0x000000
        return
    max_ets = max(scores)
    tree.root.color = 0x000000
    for node in nodes:
        if node.ets is not None:
            node.color = normalize_color(node.ets, max_ets)
