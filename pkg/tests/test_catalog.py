import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from rmra import Catalog, CatalogRecord, canonicalize, make_array
from rmra.errors import DomainError, RejectedRecord

positions_strategy = st.sets(st.integers(1, 40), min_size=1, max_size=12).map(
    lambda s: tuple(sorted({0, *s}))
)

TABLE_N12 = [0, 1, 2, 3, 4, 5, 12, 13, 19, 20, 25, 26]
TABLE_N13 = [0, 1, 2, 4, 5, 9, 14, 19, 24, 25, 30, 31, 32]


class TestCanonicalize:
    def test_self_symmetric_array(self):
        a = make_array([0, 1, 5, 6])
        assert canonicalize(a).positions == (0, 1, 5, 6)

    def test_mirror_is_smaller(self):
        a = make_array([0, 4, 5, 6])
        assert canonicalize(a).positions == (0, 1, 2, 6)

    def test_thirteen_sensor_optimal_array_is_already_canonical(self):
        a = make_array(TABLE_N13)
        m = a.mirrored()
        assert m.positions == (0, 1, 2, 7, 8, 13, 18, 23, 27, 28, 30, 31, 32)
        assert canonicalize(a) is a

    @given(positions_strategy)
    @settings(max_examples=100, deadline=None)
    def test_idempotent_and_reflection_invariant(self, positions):
        a = make_array(positions)
        c = canonicalize(a)
        assert canonicalize(c) == c
        assert canonicalize(a.mirrored()) == c


class TestCatalogRecord:
    def test_build_flags_canonical(self):
        rec = CatalogRecord.build(make_array(TABLE_N12), "search-optimal", "proven")
        assert rec.canonical
        mirrored = CatalogRecord.build(
            make_array(TABLE_N12).mirrored(), "search-optimal", "proven"
        )
        assert not mirrored.canonical
        assert mirrored.dedup_key() == rec.dedup_key()

    def test_rejects_unknown_enums(self):
        a = make_array(TABLE_N12)
        with pytest.raises(DomainError):
            CatalogRecord.build(a, "guesswork")
        with pytest.raises(DomainError):
            CatalogRecord.build(a, "cfe", optimality="definitely")

    def test_json_round_trip(self):
        rec = CatalogRecord.build(make_array(TABLE_N12), "cfe", fixation=None)
        again = CatalogRecord.from_json(rec.to_json())
        assert again == rec


class TestCatalog:
    def test_insert_and_reload(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        cat = Catalog(path)
        assert cat.insert(CatalogRecord.build(make_array(TABLE_N12), "search-optimal", "proven"))
        assert len(Catalog(path)) == 1

    def test_duplicate_insert_is_a_noop(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        cat = Catalog(path)
        rec = CatalogRecord.build(make_array([0, 1, 2, 3]), "external")
        assert cat.insert(rec)
        assert not cat.insert(rec)
        assert len(cat) == 1
        assert len(path.read_text().splitlines()) == 1

    def test_mirror_insert_is_a_noop(self, tmp_path):
        cat = Catalog(tmp_path / "cat.jsonl")
        a = make_array(TABLE_N12)
        assert cat.insert(CatalogRecord.build(a, "external"))
        assert not cat.insert(CatalogRecord.build(a.mirrored(), "external"))

    def test_invalid_array_is_rejected_with_report(self, tmp_path):
        cat = Catalog(tmp_path / "cat.jsonl")
        with pytest.raises(RejectedRecord) as exc:
            cat.insert(CatalogRecord.build(make_array([0, 1, 2, 5, 6]), "external"))
        assert exc.value.report.is_tfrsa is False
        assert len(cat) == 0

    def test_query_filters(self, tmp_path):
        cat = Catalog(tmp_path / "cat.jsonl")
        cat.insert(CatalogRecord.build(make_array(TABLE_N12), "search-optimal", "proven"))
        cat.insert(CatalogRecord.build(make_array([0, 1, 4, 5, 7, 8, 9, 10]), "cfe"))
        assert len(cat.query(n=12)) == 1
        assert len(cat.query(aperture=(10, 20))) == 1
        assert len(cat.query(generator="cfe")) == 1
        assert len(cat.query(n=12, generator="cfe")) == 0

    def test_export_import_round_trip_is_byte_identical(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        cat = Catalog(path)
        cat.insert(CatalogRecord.build(make_array(TABLE_N12), "search-optimal", "proven"))
        cat.insert(CatalogRecord.build(make_array([0, 1, 4, 5, 7, 8, 9, 10]), "cfe"))
        original = path.read_text()
        buffer = io.StringIO()
        Catalog.export(Catalog(path), "jsonl", buffer)
        assert buffer.getvalue() == original

    def test_csv_export(self, tmp_path):
        cat = Catalog(tmp_path / "cat.jsonl")
        cat.insert(CatalogRecord.build(make_array(TABLE_N12), "search-optimal", "proven"))
        buffer = io.StringIO()
        Catalog.export(cat, "csv", buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "n,aperture,positions,generator,optimality,fixation,canonical,created_at,tool_version"
        assert lines[1].startswith("12,26,0 1 2 3 4 5 12 13 19 20 25 26,search-optimal,proven")

    def test_unknown_export_format(self):
        with pytest.raises(DomainError):
            Catalog.export([], "parquet", io.StringIO())

    def test_compact_removes_duplicate_lines(self, tmp_path):
        path = tmp_path / "cat.jsonl"
        rec = CatalogRecord.build(make_array([0, 1, 2, 3]), "external")
        path.write_text(rec.to_json() + "\n" + rec.to_json() + "\n")
        cat = Catalog(path)
        assert len(cat) == 1
        cat.compact()
        assert len(path.read_text().splitlines()) == 1

    def test_every_record_revalidates(self, tmp_path):
        # records can only enter through insert, which re-runs the
        # robustness assessment; a catalog therefore never holds a
        # non-robust array
        cat = Catalog(tmp_path / "cat.jsonl")
        cat.insert(CatalogRecord.build(make_array(TABLE_N12), "search-optimal", "proven"))
        from rmra import assess

        assert all(assess(rec.array).is_tfrsa for rec in cat)
