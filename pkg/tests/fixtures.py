"""Hand-encoded divides used across the test suite.

Rotation systems are counterclockwise; edge e runs tail -> head as +e.
"""
from divides.divide import Divide


def circle_divide():
    """One crossing-free closed curve (traversed counterclockwise); a
    marker vertex carries the rotation."""
    return Divide(
        branches=[(True, [1])],
        rotations={0: [1, -1]},
        boundary=[],
        outer_face=-1,
    )


def figure_eight_divide():
    """One closed branch with a single self-crossing."""
    return Divide(
        branches=[(True, [1, 2])],
        rotations={0: [-1, -2, 2, 1]},
        boundary=[],
        outer_face=-1,
    )


def node_divide():
    """Two straight segments crossing once.

    Endpoints sit at E(2), N(4), W(1), S(3) on the boundary circle.
    """
    return Divide(
        branches=[(False, [1, 2]), (False, [3, 4])],
        rotations={
            0: [2, 4, -1, -3],
            1: [1],
            2: [-2],
            3: [3],
            4: [-4],
        },
        boundary=[2, 4, 1, 3],
    )


def cusp_divide():
    """One open branch with a single loop: the ordinary-cusp divide."""
    return Divide(
        branches=[(False, [1, 2, 3])],
        rotations={
            0: [-1, -2, 2, 3],
            1: [1],
            2: [-3],
        },
        boundary=[1, 2],
    )


def two_parabolas_divide():
    """Two smooth arcs crossing twice (a tangency pair morsified);
    boundary word (1,1,2,2)."""
    return Divide(
        branches=[(False, [1, 2, 3]), (False, [4, 5, 6])],
        rotations={
            0: [-1, -4, 2, 5],
            1: [3, -5, -2, 6],
            2: [1],
            3: [-3],
            4: [4],
            5: [-6],
        },
        boundary=[3, 2, 4, 5],
    )


def disjoint_circles_divide():
    """Two crossing-free closed curves: violates the pairwise-crossing rule."""
    return Divide(
        branches=[(True, [1]), (True, [2])],
        rotations={0: [1, -1], 1: [2, -2]},
        boundary=[],
        outer_face=-1,
    )
