#!/usr/bin/env python3
"""Generate the desk-scale topological map fixtures under maps/.

Grid-with-loops layouts sized to the four floor plans plus the small
prediction topology. Deterministic; run once and commit the JSON.
"""
import json
import random


def grid_nodes(cols, rows, width, height, jitter=0.0, rng=None):
    nodes = []
    for r in range(rows):
        for c in range(cols):
            x = width * c / (cols - 1)
            y = height * r / (rows - 1)
            if jitter and rng and 0 < c < cols - 1:
                x += rng.uniform(-jitter, jitter)
            if jitter and rng and 0 < r < rows - 1:
                y += rng.uniform(-jitter, jitter)
            nodes.append((round(x, 2), round(y, 2)))
    return nodes


def grid_candidates(cols, rows, diagonals=False):
    cand = []
    at = lambda c, r: r * cols + c
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                cand.append((at(c, r), at(c + 1, r)))
            if r + 1 < rows:
                cand.append((at(c, r), at(c, r + 1)))
            if diagonals and c + 1 < cols and r + 1 < rows:
                cand.append((at(c, r), at(c + 1, r + 1)))
                cand.append((at(c + 1, r), at(c, r + 1)))
    return cand


def choose_edges(n_nodes, candidates, target, rng):
    """Random spanning tree over the candidate set, then random extras."""
    parent = list(range(n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pool = candidates[:]
    rng.shuffle(pool)
    chosen, extras = [], []
    for u, v in pool:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
        else:
            extras.append((u, v))
    assert len(chosen) == n_nodes - 1, "candidate set does not span the grid"
    need = target - len(chosen)
    assert 0 <= need <= len(extras), (target, len(chosen), len(extras))
    chosen += extras[:need]
    chosen.sort()
    return chosen


def emit(path, nodes, edges):
    doc = {
        "nodes": [{"id": i, "x": x, "y": y} for i, (x, y) in enumerate(nodes)],
        "edges": [{"id": i, "u": u, "v": v} for i, (u, v) in enumerate(edges)],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    print(f"{path}: {len(nodes)} nodes, {len(edges)} edges")


def main():
    # 9 nodes / 13 edges: 3x3 grid at 5 m spacing plus one diagonal
    nodes = grid_nodes(3, 3, 10, 10)
    edges = grid_candidates(3, 3)
    edges.append((0, 4))
    edges.sort()
    assert len(edges) == 13
    emit("maps/prediction_9n13e.json", nodes, edges)

    # small office: 16 nodes / 18 edges in 25 x 20 m
    rng = random.Random(20240811)
    nodes = grid_nodes(4, 4, 25, 20, jitter=1.0, rng=rng)
    emit("maps/small_office.json", nodes, choose_edges(16, grid_candidates(4, 4), 18, rng))

    # medium office: 20 nodes / 30 edges in 30 x 30 m
    rng = random.Random(20240812)
    nodes = grid_nodes(5, 4, 30, 30, jitter=1.2, rng=rng)
    emit("maps/medium_office.json", nodes,
         choose_edges(20, grid_candidates(5, 4, diagonals=True), 30, rng))

    # large office: 18 nodes / 37 edges in 50 x 30 m (dense connectivity)
    rng = random.Random(20240813)
    nodes = grid_nodes(6, 3, 50, 30, jitter=1.0, rng=rng)
    emit("maps/large_office.json", nodes,
         choose_edges(18, grid_candidates(6, 3, diagonals=True), 37, rng))

    # hospital: 40 nodes / 55 edges in 125 x 35 m
    rng = random.Random(20240814)
    nodes = grid_nodes(10, 4, 125, 35, jitter=1.5, rng=rng)
    emit("maps/hospital.json", nodes, choose_edges(40, grid_candidates(10, 4), 55, rng))


if __name__ == "__main__":
    main()
