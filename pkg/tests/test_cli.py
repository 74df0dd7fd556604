import json

from tropcount.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_enumerate_degree_one(tmp_path, capsys):
    out = tmp_path / "curves.json"
    code, _, _ = run_cli(
        ["enumerate", "--degree", "1", "--genus", "0", "--mikhalkin-seed", "7", "-o", str(out)],
        capsys,
    )
    assert code == 0
    data = json.loads(out.read_text())
    assert data["schema"] == "tropcount/1"
    assert len(data["curves"]) == 1


def test_count_real_line(capsys):
    code, out, _ = run_cli(
        ["count", "--degree", "1", "--real", "--signs", "++,++", "--sign-t", "+"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["totals"]["real"] == 1


def test_count_complex_degree_two(capsys):
    code, out, _ = run_cli(["count", "--degree", "2", "--complex"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["totals"]["complex"] == 1
    assert data["totals"]["welschinger"] == 1


def test_count_table_format(capsys):
    code, out, _ = run_cli(
        ["count", "--degree", "1", "--complex", "--format", "table"], capsys
    )
    assert code == 0
    assert "N=1" in out


def test_count_real_requires_signs(capsys):
    code, _, err = run_cli(["count", "--degree", "1", "--real"], capsys)
    assert code == 2
    assert "signs" in err


def test_count_parity_field(capsys):
    code, out, _ = run_cli(
        ["count", "--degree", "2", "--complex", "--real", "--signs", "all-positive"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["parity_ok"] is True


def test_welschinger_degree_one(capsys):
    code, out, _ = run_cli(["welschinger", "--degree", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["w_real_trop"] == 1
    assert all(r["agrees"] for r in data["rows"])


def test_malformed_points_file(tmp_path, capsys):
    bad = tmp_path / "pts.json"
    bad.write_text("{not json")
    code, _, err = run_cli(
        ["enumerate", "--degree", "1", "--points", str(bad)], capsys
    )
    assert code == 2


def test_points_file_roundtrip(tmp_path, capsys):
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps({"points": [["-3", "0"], ["0", "-5"]], "signs": ["++", "++"]}))
    code, out, _ = run_cli(
        ["count", "--degree", "1", "--points", str(pts), "--real"], capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["totals"]["real"] == 1


def test_render_deterministic(tmp_path, capsys):
    curves = tmp_path / "curves.json"
    run_cli(["enumerate", "--degree", "1", "--mikhalkin-seed", "7", "-o", str(curves)], capsys)
    a = tmp_path / "a.svg"
    b = tmp_path / "b.svg"
    assert run_cli(["render", str(curves), "-o", str(a)], capsys)[0] == 0
    assert run_cli(["render", str(curves), "-o", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("<svg")
    assert text.count("<line") == 3  # three rays from one vertex


def test_render_dual_panel(tmp_path, capsys):
    curves = tmp_path / "curves.json"
    run_cli(["enumerate", "--degree", "1", "--mikhalkin-seed", "7", "-o", str(curves)], capsys)
    out = tmp_path / "dual.svg"
    assert run_cli(["render", str(curves), "--dual", "-o", str(out)], capsys)[0] == 0
    assert "<polygon" in out.read_text()


def test_render_rejects_wrong_schema(tmp_path, capsys):
    doc = tmp_path / "doc.json"
    doc.write_text(json.dumps({"schema": "other/9", "kind": "curve-set"}))
    code, _, _ = run_cli(["render", str(doc)], capsys)
    assert code == 2


def test_json_roundtrip_exact(tmp_path, capsys):
    """Re-ingesting emitted curves reproduces the same count report."""
    curves_path = tmp_path / "curves.json"
    run_cli(
        ["enumerate", "--degree", "2", "--mikhalkin-seed", "7", "-o", str(curves_path)],
        capsys,
    )
    data = json.loads(curves_path.read_text())
    from tropcount.cli import curve_from_json
    from tropcount.counting import count_complex
    from tropcount.incidence import AffineConstraint
    from fractions import Fraction

    curves = [curve_from_json(c) for c in data["curves"]]
    constraints = [
        AffineConstraint.point([Fraction(x) for x in p]) for p in data["points"]
    ]
    report = count_complex(curves, constraints)
    assert report.n_trop == 1

    # identical rows when counting the freshly enumerated curves directly
    from tropcount.enumeration import PointConfiguration, enumerate_curves
    from tropcount.tropical import Degree

    config = PointConfiguration.explicit(
        [[Fraction(x) for x in p] for p in data["points"]]
    )
    direct = enumerate_curves(0, Degree.projective(2), config)
    direct_report = count_complex(direct, constraints)
    assert direct_report.rows == report.rows


def test_unsupported_genus_exit(capsys):
    code, _, err = run_cli(["enumerate", "--degree", "1", "--genus", "1"], capsys)
    assert code == 2


def test_threads_env_validated(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TROPCOUNT_THREADS", "not-a-number")
    code, _, err = run_cli(["enumerate", "--degree", "1"], capsys)
    assert code == 2
    monkeypatch.setenv("TROPCOUNT_THREADS", "2")
    out = tmp_path / "c.json"
    code, _, _ = run_cli(["enumerate", "--degree", "1", "-o", str(out)], capsys)
    assert code == 0
    assert len(json.loads(out.read_text())["curves"]) == 1


def test_genericity_failure_exit_code(monkeypatch, capsys):
    import tropcount.cli as cli
    from tropcount.enumeration import GenericityFailure

    def boom(*args, **kwargs):
        raise GenericityFailure("synthetic")

    monkeypatch.setattr(cli, "enumerate_curves", boom)
    code, _, err = run_cli(["enumerate", "--degree", "1"], capsys)
    assert code == 3
    assert "reseed" in err


def test_crosscheck_failure_exit_code(monkeypatch, capsys):
    import tropcount.cli as cli
    from tropcount.counting import CrossCheckError

    def boom(*args, **kwargs):
        raise CrossCheckError("synthetic")

    monkeypatch.setattr(cli, "count_complex", boom)
    code, _, err = run_cli(["count", "--degree", "1", "--complex"], capsys)
    assert code == 4
