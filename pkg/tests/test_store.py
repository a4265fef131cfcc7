import io

import pytest

from cloneval.errors import MissingSourceFile, UnknownPair
from cloneval.fragments import ClonePair, CodeFragment, Label
from cloneval.mutation import export_benchmark, generate_benchmark, synthesize_corpus
from cloneval.store import CloneStore, ImportSpec


def fixed_clock():
    return "2024-01-01T00:00:00+00:00"


def make_store(tmp_path, name="clones.store"):
    return CloneStore(tmp_path / name, clock=fixed_clock)


def sample_pair(pair_id="p1", text1="int a = 1;", text2="int b = 1;"):
    return ClonePair(pair_id, CodeFragment(text1), CodeFragment(text2), detector="nicad")


# -- basic writes ----------------------------------------------------------


def test_add_and_get(tmp_path):
    store = make_store(tmp_path)
    record, was_new = store.add_pair(sample_pair())
    assert was_new and store.get("p1").pair_id == "p1"
    assert record.current_label is Label.UNLABELED


def test_duplicate_pair_deduplicated(tmp_path):
    store = make_store(tmp_path)
    store.add_pair(sample_pair("p1"))
    _, was_new = store.add_pair(sample_pair("p2"))  # same fragments, new id
    assert not was_new
    assert len(store) == 1


def test_label_history_append_and_update(tmp_path):
    store = make_store(tmp_path)
    store.add_pair(sample_pair())
    store.record_label("p1", "alice", Label.TRUE_POSITIVE)
    record = store.record_label("p1", "alice", Label.FALSE_POSITIVE)
    assert record.current_label is Label.FALSE_POSITIVE
    assert len(record.history) == 2


def test_identical_consecutive_label_idempotent(tmp_path):
    store = make_store(tmp_path)
    store.add_pair(sample_pair())
    store.record_label("p1", "alice", Label.TRUE_POSITIVE)
    record = store.record_label("p1", "alice", Label.TRUE_POSITIVE)
    assert len(record.history) == 1


def test_unknown_pair_rejected(tmp_path):
    store = make_store(tmp_path)
    with pytest.raises(UnknownPair):
        store.record_label("ghost", "alice", Label.TRUE_POSITIVE)


def test_partitions_are_disjoint_and_exhaustive(tmp_path):
    store = make_store(tmp_path)
    for i in range(6):
        store.add_pair(sample_pair(f"p{i}", f"int a{i} = 1;", f"int b{i} = 2;"))
    store.record_label("p0", "a", Label.TRUE_POSITIVE)
    store.record_label("p1", "a", Label.FALSE_POSITIVE)
    kt, kf, rest = store.partitions()
    assert set(kt) == {"p0"} and set(kf) == {"p1"}
    assert len(kt) + len(kf) + len(rest) == len(store)


def test_persistence_across_reopen(tmp_path):
    store = make_store(tmp_path)
    store.add_pair(sample_pair())
    store.record_label("p1", "alice", Label.TRUE_POSITIVE)
    reopened = CloneStore(tmp_path / "clones.store")
    record = reopened.get("p1")
    assert record.current_label is Label.TRUE_POSITIVE
    assert len(record.history) == 1


# -- CSV import --------------------------------------------------------------


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as stream:
        import csv

        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def test_empty_csv_imports_nothing(tmp_path):
    csv_path = tmp_path / "pairs.csv"
    write_csv(csv_path, ["code1", "code2", "detector", "lang"], [])
    store = make_store(tmp_path)
    report = store.import_pairs(ImportSpec("generic-csv", str(csv_path)))
    assert report.imported == 0


def test_inline_rows_import_and_dedup(tmp_path):
    csv_path = tmp_path / "pairs.csv"
    row = ["int a = 1;", "int b = 1;", "simian", "Java"]
    write_csv(csv_path, ["code1", "code2", "detector", "lang"], [row, row])
    store = make_store(tmp_path)
    report = store.import_pairs(ImportSpec("generic-csv", str(csv_path)))
    assert report.imported == 1
    assert report.deduplicated == 1


def test_malformed_row_skipped_and_counted(tmp_path):
    csv_path = tmp_path / "pairs.csv"
    write_csv(
        csv_path,
        ["file1", "start1", "end1", "file2", "start2", "end2", "detector", "lang"],
        [["a.java", "x", "2", "b.java", "1", "2", "tool", "Java"]],
    )
    store = make_store(tmp_path)
    report = store.import_pairs(ImportSpec("generic-csv", str(csv_path)))
    assert report.imported == 0 and report.malformed == 1
    assert report.messages


def test_file_rows_materialized(tmp_path):
    source = tmp_path / "Code.java"
    source.write_text("line1\nline2\nline3\nline4\n", encoding="utf-8")
    csv_path = tmp_path / "pairs.csv"
    write_csv(
        csv_path,
        ["file1", "start1", "end1", "file2", "start2", "end2", "detector", "lang"],
        [["Code.java", "1", "2", "Code.java", "3", "4", "tool", "Java"]],
    )
    store = make_store(tmp_path)
    report = store.import_pairs(ImportSpec("generic-csv", str(csv_path)))
    assert report.imported == 1
    record = store.records()[0]
    assert record.fragment1.source_text == "line1\nline2"
    assert record.fragment2.start_line == 3


def test_missing_source_file_raises(tmp_path):
    csv_path = tmp_path / "pairs.csv"
    write_csv(
        csv_path,
        ["file1", "start1", "end1", "file2", "start2", "end2", "detector", "lang"],
        [["nope.java", "1", "2", "nope.java", "3", "4", "tool", "Java"]],
    )
    store = make_store(tmp_path)
    with pytest.raises(MissingSourceFile):
        store.import_pairs(ImportSpec("generic-csv", str(csv_path)))


def test_csv_export_round_trip(tmp_path):
    source = tmp_path / "Code.java"
    source.write_text("\n".join(f"int v{i} = {i};" for i in range(10)) + "\n", encoding="utf-8")
    csv_path = tmp_path / "pairs.csv"
    rows = [
        ["Code.java", "1", "3", "Code.java", "4", "6", "tool", "Java"],
        ["Code.java", "2", "5", "Code.java", "6", "9", "tool", "Java"],
    ]
    write_csv(csv_path, ["file1", "start1", "end1", "file2", "start2", "end2", "detector", "lang"], rows)
    store = make_store(tmp_path)
    store.import_pairs(ImportSpec("generic-csv", str(csv_path)))
    buffer = io.StringIO()
    store.export_pairs_csv(buffer)
    assert buffer.getvalue() == (csv_path.read_text(encoding="utf-8"))


# -- benchmark directory import ------------------------------------------------


def test_benchmark_directory_round_trip(tmp_path):
    corpus = synthesize_corpus(12, seed=2)
    pairs, manifest = generate_benchmark(corpus, 6, 6, seed=2)
    bench_dir = tmp_path / "bench"
    export_benchmark(pairs, manifest, bench_dir)
    store = make_store(tmp_path)
    report = store.import_pairs(ImportSpec("pairs-directory", str(bench_dir)))
    assert report.imported == 12
    kt, kf, rest = store.partitions()
    assert len(kt) == 6 and len(kf) == 6 and not rest


# -- training set assembly ---------------------------------------------------------


def populate_labeled(store, tp=3, fp=1):
    for i in range(tp):
        store.add_pair(sample_pair(f"t{i}", f"int x{i} = 1;\nuse(x{i});", f"int x{i} = 1;\nuse(x{i});"))
        store.record_label(f"t{i}", "u", Label.TRUE_POSITIVE)
    for i in range(fp):
        store.add_pair(sample_pair(f"f{i}", f"int y{i} = 1;", f"while (q{i}) {{ run(); }}"))
        store.record_label(f"f{i}", "u", Label.FALSE_POSITIVE)


def test_assemble_training_set(tmp_path):
    store = make_store(tmp_path)
    populate_labeled(store, tp=3, fp=1)
    ts = store.assemble_training_set()
    assert len(ts) == 4
    assert ts.class_counts() == (3, 1)
    assert list(ts.pair_ids) == sorted(ts.pair_ids)


def test_assemble_filter_no_match(tmp_path):
    store = make_store(tmp_path)
    populate_labeled(store)
    assert store.assemble_training_set(labelers=["nobody"]) is None


def test_feature_cache_matches_recomputation(tmp_path):
    from cloneval.features import extract_features

    store = make_store(tmp_path)
    populate_labeled(store)
    record = store.get("t0")
    cached = store.features_for(record)
    again = store.features_for(record)
    assert cached is again  # cache hit
    fresh = extract_features(record.to_pair())
    assert fresh.values == cached.values
