"""Pytest configuration and fixtures."""

import pytest

from rectgeo import build_complex, build_dense, build_treeproduct


@pytest.fixture
def single_square():
    """One unit square 0-1-2-3."""
    return build_complex(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [(0, 1, 2, 3)])


@pytest.fixture
def grid_l():
    """
    Unit grid on [0, 2]^2 minus the square [1, 2] x [1, 2].

    Vertex ids are row-major: (0,0)=0 (1,0)=1 (2,0)=2 (0,1)=3 (1,1)=4 (2,1)=5 (0,2)=6
    (1,2)=7. Faces: 0=(0,1,4,3), 1=(1,2,5,4), 2=(3,4,7,6).
    """
    edges = [
        (0, 1), (1, 2), (3, 4), (4, 5), (6, 7),
        (0, 3), (1, 4), (2, 5), (3, 6), (4, 7),
    ]
    faces = [(0, 1, 4, 3), (1, 2, 5, 4), (3, 4, 7, 6)]
    return build_complex(8, edges, faces)


@pytest.fixture
def book():
    """Three unit pages (0, 1, 2i+1, 2i) sharing the spine 0-1."""
    edges = [(0, 1)]
    faces = []
    for i in range(1, 4):
        a, b = 2 * i, 2 * i + 1
        edges += [(0, a), (1, b), (a, b)]
        faces.append((0, 1, b, a))
    return build_complex(8, edges, faces)


@pytest.fixture
def staircase():
    """Two unit squares (0,1,2,3) and (2,4,5,6) meeting at vertex 2."""
    edges = [(0, 1), (1, 2), (2, 3), (0, 3), (2, 4), (4, 5), (5, 6), (2, 6)]
    return build_complex(7, edges, [(0, 1, 2, 3), (2, 4, 5, 6)])


@pytest.fixture
def flower():
    """Five squares around an inner vertex of degree 5; Inc(G) is a 5-cycle."""
    edges = [(0, i) for i in range(1, 6)]
    edges += [(i, 5 + i) for i in range(1, 6)]
    edges += [(5 + i, i % 5 + 1) for i in range(1, 6)]
    faces = [(0, i, 5 + i, i % 5 + 1) for i in range(1, 6)]
    return build_complex(11, edges, faces)


@pytest.fixture
def three_squares():
    """Three squares around a vertex of degree 3: a cube corner, whose link is a triangle."""
    edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (2, 5), (3, 5), (3, 6), (1, 6)]
    faces = [(0, 1, 4, 2), (0, 2, 5, 3), (0, 3, 6, 1)]
    return build_complex(7, edges, faces)


@pytest.fixture
def k23():
    """K_{2,3} with every 4-cycle filled."""
    edges = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]
    faces = [(0, 2, 1, 3), (0, 2, 1, 4), (0, 3, 1, 4)]
    return build_complex(5, edges, faces)


@pytest.fixture
def grid_l_dense(grid_l):
    return build_dense(grid_l)


@pytest.fixture
def grid_l_tree(grid_l):
    return build_treeproduct(grid_l)


@pytest.fixture(params=["dense", "treeproduct"])
def kind(request):
    """Both structure variants."""
    return request.param
