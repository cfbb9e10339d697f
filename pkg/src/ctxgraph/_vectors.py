"""Integer forms of the four-dimensional F9 representation vectors.

Each entry is ``(components, squared_norm)``: the unit vector is
``components / sqrt(squared_norm)``.  Index 0 is the handle, indices
1..16 are the measurement vectors (1..9 realise F9, 10..16 complete
the measurement bases).
"""

HANDLE = ((1, 1, 1, 0), 3)

F9_VECTORS = (
    ((1, 1, 0, 1), 3),
    ((1, 0, 1, -1), 3),
    ((0, 1, 1, 1), 3),
    ((1, 1, 0, -1), 3),
    ((1, 0, 1, 1), 3),
    ((0, 1, 1, -1), 3),
    ((1, 0, 0, 0), 1),
    ((0, 1, 0, 0), 1),
    ((0, 0, 1, 0), 1),
)

EXTENSION_VECTORS = (
    ((0, 0, 0, 1), 1),
    ((0, -1, 1, 1), 3),
    ((-1, 1, 1, 0), 3),
    ((1, 0, -1, 1), 3),
    ((1, -1, 1, 0), 3),
    ((1, 1, -1, 0), 3),
    ((-1, 1, 0, 1), 3),
)

# Post-measurement states for outcome 0, as printed alongside the experiment.
PERP_VECTORS = (
    ((1, 1, 3, -2), 15),
    ((1, 3, 1, 2), 15),
    ((3, 1, 1, -2), 15),
    ((1, 1, 3, 2), 15),
    ((1, 3, 1, -2), 15),
    ((3, 1, 1, 2), 15),
    ((0, 1, 1, 0), 2),
    ((1, 0, 1, 0), 2),
    ((1, 1, 0, 0), 2),
)


def orthogonal_pairs(vectors):
    """0-based pairs (i, j), i < j, whose integer components are orthogonal."""
    pairs = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            a, b = vectors[i][0], vectors[j][0]
            if sum(x * y for x, y in zip(a, b)) == 0:
                pairs.append((i, j))
    return pairs
