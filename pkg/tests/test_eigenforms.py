import json
import shutil

import pytest

from bcpadic.eigenforms import DATA_ENV, data_dir, form_symbols, load_eigenform

from oracles import CURVES, LEVELS, MORE_CURVES, curve_ap, curve_ap_two


@pytest.mark.parametrize("label,ainv", sorted({**CURVES, **MORE_CURVES}.items()))
def test_packaged_coefficients_are_point_counts(label, ainv):
    f = load_eigenform(label)
    assert f.weight == 2 and f.k == 0
    for ell, a in f.coefficients.items():
        assert a == (curve_ap_two(ainv) if ell == 2 else curve_ap(ainv, ell)), ell


def test_levels():
    for label, N in LEVELS.items():
        assert load_eigenform(label).level == N


def test_missing_data():
    with pytest.raises(FileNotFoundError):
        load_eigenform("no-such-form")
    with pytest.raises(KeyError):
        load_eigenform("11a").a(10007)


def _write(tmp_path, label, coeffs):
    rec = {"label": label, "level": 11, "weight": 2, "source": "test", "coefficients": coeffs}
    (tmp_path / f"{label}.json").write_text(json.dumps(rec))


def test_data_directory_from_the_environment(tmp_path, monkeypatch):
    shutil.copy(data_dir() / "11a.json", tmp_path / "copy11.json")
    raw = json.loads((tmp_path / "copy11.json").read_text())
    raw["label"] = "copy11"
    (tmp_path / "copy11.json").write_text(json.dumps(raw))
    monkeypatch.setenv(DATA_ENV, str(tmp_path))
    assert data_dir() == tmp_path
    f = load_eigenform("copy11")
    assert f.a(3) == -1
    assert form_symbols("copy11").plus.N == 11
    with pytest.raises(FileNotFoundError):
        load_eigenform("17a")


def test_ramanujan_bound_rejects_bad_data(tmp_path):
    _write(tmp_path, "bad", {"2": -2, "3": 4})
    with pytest.raises(ValueError, match="Ramanujan"):
        load_eigenform("bad", tmp_path)
    _write(tmp_path, "ok", {"2": -2, "3": 3, "11": 1})
    assert load_eigenform("ok", tmp_path).a(3) == 3
