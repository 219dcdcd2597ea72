import numpy as np
import pytest

from collneg import datasets
from collneg.datasets import Dataset, DatasetFormatError, generate, load, save, split

def test_generate_deterministic():
    a = generate(500, 42)
    b = generate(500, 42)
    assert np.array_equal(a.probabilities, b.probabilities)
    assert np.array_equal(a.negativities, b.negativities)


def test_generate_thread_count_invariance():
    serial = generate(10_000, 13, threads=1)
    threaded = generate(10_000, 13, threads=4)
    assert np.array_equal(serial.probabilities, threaded.probabilities)
    assert np.array_equal(serial.negativities, threaded.negativities)


def test_generate_value_ranges():
    ds = generate(5000, 2)
    assert ds.probabilities.min() >= 0.0
    assert ds.probabilities.max() <= 1.0
    assert ds.negativities.min() >= 0.0
    assert ds.negativities.max() <= 1.0


def test_generate_rejects_negative_count():
    with pytest.raises(ValueError):
        generate(-1, 0)


def test_zero_negativity_fraction_frozen():
    # Measured once at this seed and frozen as a regression constant; the
    # sizeable mass at zero reflects the separable share of sampled states.
    ds = generate(10_000, 7)
    frac = datasets.zero_negativity_fraction(ds)
    assert frac == pytest.approx(0.4164, abs=1e-12)


def test_empty_dataset_round_trip(tmp_path):
    ds = generate(0, 9)
    for fmt in ("csv", "bin"):
        path = tmp_path / f"empty.{fmt}"
        save(ds, path, fmt=fmt)
        back = load(path)
        assert len(back) == 0
        assert back.seed == 9


def test_save_is_byte_stable(tmp_path):
    ds = generate(200, 4)
    for fmt in ("csv", "bin"):
        p1 = tmp_path / f"a.{fmt}"
        p2 = tmp_path / f"b.{fmt}"
        save(ds, p1, fmt=fmt)
        save(ds, p2, fmt=fmt)
        assert p1.read_bytes() == p2.read_bytes()


def test_round_trip_both_formats(tmp_path):
    ds = generate(300, 11)
    for fmt in ("csv", "bin"):
        path = tmp_path / f"ds.{fmt}"
        save(ds, path, fmt=fmt)
        back = load(path)
        assert back.seed == ds.seed
        assert back.version == ds.version
        assert np.array_equal(back.probabilities, ds.probabilities)
        assert np.array_equal(back.negativities, ds.negativities)


def test_csv_and_binary_agree(tmp_path):
    ds = generate(250, 21)
    save(ds, tmp_path / "d.csv", fmt="csv")
    save(ds, tmp_path / "d.bin", fmt="bin")
    a = load(tmp_path / "d.csv")
    b = load(tmp_path / "d.bin")
    assert np.max(np.abs(a.probabilities - b.probabilities)) < 1e-15
    assert np.max(np.abs(a.negativities - b.negativities)) < 1e-15


def test_load_rejects_malformed_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("not a dataset\n")
    with pytest.raises(DatasetFormatError):
        load(path)

    ds = generate(5, 1)
    good = tmp_path / "good.csv"
    save(ds, good, fmt="csv")
    lines = good.read_text().splitlines()
    lines[3] = lines[3].rsplit(",", 1)[0]  # drop a column
    (tmp_path / "short_row.csv").write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetFormatError, match="11 columns"):
        load(tmp_path / "short_row.csv")

    lines = good.read_text().splitlines()
    del lines[-1]  # count mismatch against header
    (tmp_path / "missing_row.csv").write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetFormatError, match="declares"):
        load(tmp_path / "missing_row.csv")


def test_load_rejects_bad_binary(tmp_path):
    ds = generate(5, 1)
    path = tmp_path / "d.bin"
    save(ds, path, fmt="bin")
    data = path.read_bytes()

    truncated = tmp_path / "trunc.bin"
    truncated.write_bytes(data[:-4])
    with pytest.raises(DatasetFormatError, match="record bytes"):
        load(truncated)

    wrong_version = tmp_path / "ver.bin"
    hacked = bytearray(data)
    hacked[4] = 99
    wrong_version.write_bytes(bytes(hacked))
    with pytest.raises(DatasetFormatError, match="version"):
        load(wrong_version)


def test_load_missing_file(tmp_path):
    with pytest.raises(DatasetFormatError):
        load(tmp_path / "nope.csv")


def test_split_partition():
    ds = generate(1000, 3)
    train, test = split(ds, 0.8, seed=17)
    assert len(train) == 800
    assert len(test) == 200
    merged = np.vstack([train.probabilities, test.probabilities])
    assert np.array_equal(
        np.sort(merged, axis=0), np.sort(ds.probabilities, axis=0)
    )
    train_rows = {tuple(r) for r in train.probabilities}
    test_rows = {tuple(r) for r in test.probabilities}
    assert not train_rows & test_rows


def test_split_stable_across_runs():
    ds = generate(100, 3)
    a_train, _ = split(ds, 0.7, seed=5)
    b_train, _ = split(ds, 0.7, seed=5)
    assert np.array_equal(a_train.probabilities, b_train.probabilities)


def test_split_rejects_bad_fraction():
    ds = generate(10, 0)
    for bad in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            split(ds, bad, seed=0)


def test_features_slice():
    ds = generate(10, 5)
    assert np.array_equal(ds.features(7), ds.probabilities[:, :7])
    with pytest.raises(ValueError):
        ds.features(11)


def test_dataset_header_fields():
    ds = generate(3, 6)
    assert ds.version == datasets.FORMAT_VERSION
    assert ds.digest == datasets.GENERATOR_DIGEST
    assert len(ds) == 3
