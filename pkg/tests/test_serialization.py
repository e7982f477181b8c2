"""Tests for serialization functionality."""

import json

import numpy as np
import pytest

from rectgeo import PointSpec, build_dense, build_treeproduct, query, unfold
from rectgeo.boundary import boundary_walk_dense
from rectgeo.exceptions import (
    DeserializationError,
    SerializationFormatError,
    SerializationVersionError,
)
from rectgeo.serialization import (
    FORMAT_VERSION,
    GeodesicEncoder,
    complex_to_dict,
    dict_to_complex,
    dict_to_structure,
    from_dict,
    from_json,
    load,
    load_complex,
    load_structure,
    path_to_dict,
    save,
    structure_to_dict,
    to_dict,
    to_json,
)


class TestDictSerialization:
    """Test dictionary serialization."""

    def test_complex_to_dict(self, grid_l):
        """Test the complex document."""
        d = complex_to_dict(grid_l)
        assert d["type"] == "RectComplex"
        assert d["format_version"] == FORMAT_VERSION
        assert d["vertices"] == 8
        assert d["edges"][0] == [0, 1, 1.0]
        assert d["faces"][2] == [3, 4, 7, 6]

    def test_dict_to_complex(self, grid_l):
        """Test the complex is rebuilt."""
        assert dict_to_complex(complex_to_dict(grid_l)) == grid_l

    def test_plain_complex_file(self, grid_l):
        """Test an untagged complex document is accepted."""
        d = complex_to_dict(grid_l)
        del d["type"], d["format_version"]
        assert dict_to_complex(d) == grid_l
        assert from_dict(d) == grid_l

    def test_plain_complex_default_lengths(self, single_square):
        """Test edges without a length are unit edges."""
        text = '{"vertices": 4, "edges": [[0,1],[1,2],[2,3],[0,3]], "faces": [[0,1,2,3]]}'
        K = from_json(text)
        assert K == single_square
        assert list(K.lengths) == [1.0, 1.0, 1.0, 1.0]

    def test_missing_key(self, grid_l):
        """Test an incomplete document."""
        d = complex_to_dict(grid_l)
        del d["faces"]
        with pytest.raises(DeserializationError):
            dict_to_complex(d)

    def test_version_mismatch(self, grid_l):
        """Test documents from another format version are refused."""
        d = complex_to_dict(grid_l)
        d["format_version"] = FORMAT_VERSION + 1
        with pytest.raises(SerializationVersionError):
            dict_to_complex(d)

    def test_wrong_type(self, grid_l):
        """Test a complex document is not read as a structure."""
        with pytest.raises(DeserializationError):
            dict_to_structure(complex_to_dict(grid_l))

    def test_unknown_object(self):
        """Test unsupported objects have no document."""
        with pytest.raises(SerializationFormatError):
            to_dict({"a": 1})

    def test_dense_structure(self, grid_l_dense):
        """Test a dense matrix carries its complex and comes back read-only."""
        d = structure_to_dict(grid_l_dense)
        assert d["complex"]["type"] == "RectComplex"
        S = dict_to_structure(d)
        assert S == grid_l_dense
        assert not S.D.flags.writeable

    def test_tree_product(self, grid_l_tree):
        """Test the tree product keeps its trees and class lists."""
        S = dict_to_structure(structure_to_dict(grid_l_tree))
        assert S == grid_l_tree
        assert S.find_class(4, 2) == (1, 1)
        assert S.trees[0].lca.lca(2, 0) == grid_l_tree.trees[0].lca.lca(2, 0)


class TestJSONSerialization:
    """Test JSON serialization."""

    def test_to_json(self, single_square):
        """Test the JSON text is sorted and parseable."""
        text = to_json(single_square)
        assert json.loads(text)["type"] == "RectComplex"
        assert text.index('"edges"') < text.index('"faces"')

    def test_boundary(self, grid_l_dense):
        """Test a boundary document comes back equal."""
        B = boundary_walk_dense(grid_l_dense, 2, 6)
        assert from_json(to_json(B)) == B

    def test_chain(self, grid_l_dense):
        """Test an unfolded chain keeps its loops and images."""
        chain = unfold(boundary_walk_dense(grid_l_dense, 2, 6), grid_l_dense.theta)
        back = from_json(to_json(chain))
        assert back.blocks[0].loop.tolist() == chain.blocks[0].loop.tolist()
        assert back.blocks[0].turns == chain.blocks[0].turns
        assert back.vertex_image == chain.vertex_image

    def test_path(self, grid_l, grid_l_dense):
        """Test a geodesic keeps its breakpoints and length."""
        path = query(grid_l, grid_l_dense, PointSpec(1, 1.0, 0.5), PointSpec(2, 0.5, 1.0))
        doc = path_to_dict(path)
        assert "micros" not in doc
        back = from_json(to_json(path))
        assert back.breakpoints == path.breakpoints
        assert back.length == path.length
        assert back.gates == (2, 6)

    def test_invalid_json(self):
        """Test malformed text."""
        with pytest.raises(DeserializationError):
            from_json("{not json")

    def test_unknown_type(self):
        """Test a document without a known type tag."""
        with pytest.raises(DeserializationError):
            from_dict({"type": "Torus", "format_version": FORMAT_VERSION})


class TestFileSerialization:
    """Test file serialization."""

    def test_save_load_json(self, tmp_path, grid_l):
        """Test saving and loading a complex as JSON."""
        filename = str(tmp_path / "complex.json")
        save(grid_l, filename)
        assert load(filename) == grid_l

    def test_save_load_pickle(self, tmp_path, grid_l_tree):
        """Test saving and loading with pickle."""
        filename = str(tmp_path / "structure.pkl")
        save(grid_l_tree, filename, format="pickle")
        assert load(filename, format="pickle") == grid_l_tree

    def test_unknown_format(self, tmp_path, grid_l):
        """Test formats other than json and pickle."""
        with pytest.raises(SerializationFormatError):
            save(grid_l, str(tmp_path / "complex.yaml"), format="yaml")
        with pytest.raises(SerializationFormatError):
            load(str(tmp_path / "complex.yaml"), format="yaml")

    def test_load_complex_from_structure(self, tmp_path, book):
        """Test a structure file also serves as a complex file."""
        filename = str(tmp_path / "book.struct.json")
        save(build_treeproduct(book), filename)
        assert load_complex(filename) == book
        assert load_structure(filename).kind == "treeproduct"

    def test_load_structure_rejects_complex(self, tmp_path, book):
        """Test a plain complex file is not a structure."""
        filename = str(tmp_path / "book.json")
        save(book, filename)
        with pytest.raises(DeserializationError):
            load_structure(filename)


class TestJSONEncoder:
    """Test custom JSON encoder."""

    def test_numpy_values(self):
        """Test numpy scalars and arrays are encoded."""
        text = json.dumps({"d": np.int64(3), "x": np.float64(0.5), "a": np.arange(2)}, cls=GeodesicEncoder)
        assert json.loads(text) == {"d": 3, "x": 0.5, "a": [0, 1]}

    def test_nested_objects(self, single_square):
        """Test library objects inside plain containers."""
        text = json.dumps({"complex": single_square, "pt": PointSpec(0, 0.5, 0.25)}, cls=GeodesicEncoder)
        data = json.loads(text)
        assert data["complex"]["vertices"] == 4
        assert data["pt"] == {"face": 0, "alpha": 0.5, "beta": 0.25}

    def test_dense_from_complex(self, single_square):
        """Test a dense structure built after a round trip matches the original."""
        K = from_json(to_json(single_square))
        assert build_dense(K) == build_dense(single_square)
