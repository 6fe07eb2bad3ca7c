import csv
import json

import pytest

from conftest import FIXTURES, load_golden
from qpchem.chem import data_path
from qpchem.cli import CSV_COLUMNS, EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main, read_config_file, UsageError
from qpchem.chem.fcidump import fcidump_read
from qpchem.rdm import dump_rdm, load_rdm

H2 = str(data_path("h2.geom"))


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_integrals_writes_fcidump(tmp_path, capsys):
    out = tmp_path / "h4.fcidump"
    assert main(["integrals", "--geometry", str(data_path("h4_chain.geom")), "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    assert "NORB=4" in text.replace(" ", "") and "NELEC=4" in text.replace(" ", "")
    ints = fcidump_read(out)
    assert ints.nelec == 4 and ints.e_nuc == pytest.approx(load_golden("h4_sto3g")["e_nuc"], abs=1e-10)
    assert "E_HF" in capsys.readouterr().out


def test_acse_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["acse", "--geometry", H2, "--out", str(out)]) == EXIT_OK
    summary = json.loads((out / "summary.json").read_text())
    assert set(summary["modes"]) == {"fermionic", "qubit"}
    for name, mode in summary["modes"].items():
        rows = read_csv(out / f"trace_{name}.csv")
        assert rows[0] == list(CSV_COLUMNS)
        assert [int(r[0]) for r in rows[1:]] == list(range(1, len(rows)))
        assert mode["converged"] and mode["abs_error_vs_fci"] < 1e-8
        assert mode["n_representability"]["passed"]
        rdm = load_rdm(out / f"rdm_{name}.txt")
        assert rdm.trace.real == pytest.approx(2.0, abs=1e-10)
    assert "fermionic" in capsys.readouterr().out


def test_acse_is_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["acse", "--geometry", H2, "--out", str(tmp_path / d), "--encoding", "qubit"]) == 0
    assert (tmp_path / "a/trace_qubit.csv").read_bytes() == (tmp_path / "b/trace_qubit.csv").read_bytes()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# h2 run\ngeometry = {H2}\nencoding = fermionic\nmax_iters = 1\n"
                   f"line_search = off\nepsilon0 = 0.05\nformat = csv\nout = {tmp_path / 'cfg'}\n")
    assert read_config_file(cfg)["line_search"] is False
    assert main(["acse", "--config", str(cfg), "--epsilon0", "0.07"]) == EXIT_OK
    rows = read_csv(tmp_path / "cfg/trace_fermionic.csv")
    assert len(rows) == 2 and float(rows[1][-1]) == 0.07
    assert not (tmp_path / "cfg/summary.json").exists()
    assert not (tmp_path / "cfg/trace_qubit.csv").exists()


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(UsageError):
        read_config_file(bad)
    bad.write_text("max_iters = many\n")
    with pytest.raises(UsageError):
        read_config_file(bad)


@pytest.mark.parametrize("argv, code", [
    (["acse", "--geometry", H2, "--max-iters", "0"], EXIT_USAGE),
    (["acse", "--geometry", H2, "--line-search", "maybe"], EXIT_USAGE),
    (["acse", "--geometry", H2, "--format", "xml"], EXIT_USAGE),
    (["acse"], EXIT_USAGE),
    (["frobnicate"], EXIT_USAGE),
    (["fci", "--geometry", "/nonexistent/h2.geom"], EXIT_IO),
    (["check-rdm", "/nonexistent/rdm.txt"], EXIT_IO),
])
def test_exit_codes(argv, code, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == code


def test_fci_from_fcidump(capsys, tmp_path):
    assert main(["fci", "--fcidump", str(FIXTURES / "h4_sto3g.fcidump"),
                 "--dump-amplitudes", str(tmp_path / "amp.txt")]) == EXIT_OK
    e = float(capsys.readouterr().out.strip())
    assert e == pytest.approx(load_golden("h4_sto3g")["e_fci"], abs=1e-8)
    lines = (tmp_path / "amp.txt").read_text().split("\n")
    assert sum(float(l.split()[1]) ** 2 + float(l.split()[2]) ** 2 for l in lines if l.strip()) == pytest.approx(1.0)


def fcidump_text(norb, nelec, entries):
    head = f" &FCI NORB={norb},NELEC={nelec},MS2=0,\n  ORBSYM={'1,' * norb}\n  ISYM=1,\n &END\n"
    return head + "".join(f"{v:.12f} {i} {j} {k} {l}\n" for v, i, j, k, l in entries)


def test_fci_one_electron(tmp_path, capsys):
    path = tmp_path / "one.fcidump"
    path.write_text(fcidump_text(2, 1, [(-0.5, 1, 1, 0, 0), (0.25, 2, 2, 0, 0), (0.1, 0, 0, 0, 0)]))
    assert main(["fci", "--fcidump", str(path)]) == EXIT_OK
    assert float(capsys.readouterr().out) == pytest.approx(-0.4, abs=1e-12)


def test_fci_empty_sector(tmp_path):
    path = tmp_path / "over.fcidump"
    path.write_text(fcidump_text(1, 3, [(-0.5, 1, 1, 0, 0)]))
    assert main(["fci", "--fcidump", str(path)]) in (EXIT_NUMERIC, EXIT_IO)


def test_check_rdm(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["acse", "--geometry", H2, "--out", str(out), "--encoding", "fermionic"]) == 0
    capsys.readouterr()
    assert main(["check-rdm", str(out / "rdm_fermionic.txt"), "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["passed"] is True

    rdm = load_rdm(out / "rdm_fermionic.txt")
    rdm.D = 2 * rdm.D
    dump_rdm(rdm, tmp_path / "double.txt")
    assert main(["check-rdm", str(tmp_path / "double.txt"), "--json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert not report["passed"] and report["trace_error"] == pytest.approx(2.0, abs=1e-8)

    (tmp_path / "junk.txt").write_text("4 2 2.0\n0 1 0 1 oops\n")
    assert main(["check-rdm", str(tmp_path / "junk.txt")]) == EXIT_IO


def test_module_entry_point():
    import subprocess
    import sys

    done = subprocess.run([sys.executable, "-m", "qpchem", "--help"], capture_output=True, text=True)
    assert done.returncode == 0 and "check-rdm" in done.stdout
