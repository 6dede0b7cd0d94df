import json
import os
import signal
import subprocess
import sys
import time

import pytest

from labskit.cli import main
from labskit.core import merit_factor
from labskit.records import decode_hex


def run_main(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    records = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, records


def test_eval_hex(capsys):
    code, recs = run_main(capsys, "eval", "--hex", "b", "--n", "4")
    assert code == 0
    (rec,) = recs
    assert rec["energy"] == 2 and rec["mf"] == 4.0
    assert rec["classification"] == "pseudo-skew-symmetric"


def test_eval_text_barker(capsys):
    code, recs = run_main(capsys, "eval", "+++++--++-+-+", "--sidelobes")
    assert code == 0
    (rec,) = recs
    assert rec["energy"] == 6
    assert rec["mf_num"] == 169 and rec["mf_den"] == 12
    assert len(rec["sidelobes"]) == 12
    assert rec["classification"] == "skew-symmetric"


def test_eval_bad_input(capsys):
    code, _ = run_main(capsys, "eval", "--hex", "zz", "--n", "8")
    assert code == 2
    code, _ = run_main(capsys, "eval")
    assert code == 2
    code, _ = run_main(capsys, "eval", "--hex", "ff")  # missing --n
    assert code == 2


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--frobnicate"])
    assert exc.value.code == 2


def test_exhaustive_values(capsys):
    code, recs = run_main(capsys, "exhaustive", "--n", "11")
    assert code == 0 and recs[0]["mf"] == 12.1
    code, recs = run_main(capsys, "exhaustive", "--n", "13")
    assert code == 0
    assert recs[0]["mf_num"] == 169 and recs[0]["mf_den"] == 12
    seq = decode_hex(recs[0]["hex"], 13)
    assert float(merit_factor(seq)) == recs[0]["mf"]


def test_exhaustive_cap_refusal(capsys):
    code, _ = run_main(capsys, "exhaustive", "--n", "25")
    assert code == 3


def test_verify_selected_rows(capsys):
    code, recs = run_main(capsys, "verify", "--rows", "573,1009", "--per-row")
    assert code == 0
    rows = [r for r in recs if r["kind"] == "row"]
    summary = [r for r in recs if r["kind"] == "summary"][0]
    assert {r["n"] for r in rows} == {573, 1009}
    assert all(r["match"] for r in rows)
    assert summary["passed"] and summary["matched"] == len(rows)


def test_verify_bundled_dataset(capsys):
    code, recs = run_main(capsys, "verify")
    assert code == 0
    summary = [r for r in recs if r["kind"] == "summary"][0]
    assert summary["passed"] and summary["match_fraction"] >= 0.95
    assert summary["total"] >= 300


def test_verify_missing_dataset(capsys):
    code, _ = run_main(capsys, "verify", "--dataset", "/nonexistent/records.psv")
    assert code == 4


def test_verify_unknown_rows(capsys):
    code, _ = run_main(capsys, "verify", "--rows", "9999")
    assert code == 3


def test_potentials_best(capsys):
    code, recs = run_main(capsys, "potentials", "--k", "39", "--parts", "4",
                          "--objective", "U")
    assert code == 0
    assert recs[0]["partition"] == [18, 11, 6, 4] and recs[0]["U"] == 3731
    code, recs = run_main(capsys, "potentials", "--k", "41", "--parts", "6",
                          "--objective", "Ustar")
    assert code == 0 and recs[0]["Ustar"] == 813


def test_potentials_all_table(capsys):
    code, recs = run_main(capsys, "potentials", "--k", "6", "--parts", "2", "--all")
    assert code == 0
    assert [r["partition"] for r in recs] == [[5, 1], [4, 2], [3, 3]]


def test_potentials_domain_error(capsys):
    code, _ = run_main(capsys, "potentials", "--k", "2", "--parts", "5")
    assert code == 3


def test_search_stream_self_consistent(capsys):
    code, recs = run_main(capsys, "search", "--n", "13", "--partition", "3",
                          "--ti", "500", "--to", "10", "--seed", "5")
    assert code == 0
    header = recs[0]
    assert header["kind"] == "config"
    assert header["seed"] == 5 and header["partition"] == [3]
    finals = {r["target"]: r for r in recs if r.get("kind") == "final"}
    assert set(finals) == {12, 13, 14}
    assert finals[13]["mf_num"] == 169 and finals[13]["mf_den"] == 12
    for r in recs:
        if r.get("kind") in ("improvement", "final") and r.get("hex"):
            seq = decode_hex(r["hex"], r["n"])
            assert merit_factor(seq).numerator == r["mf_num"]
            assert merit_factor(seq).denominator == r["mf_den"]
    summary = [r for r in recs if r.get("kind") == "summary"][0]
    assert summary["restarts"] >= 1 and not summary["interrupted"]


def test_search_spec_example_reaches_three(capsys):
    code, recs = run_main(capsys, "search", "--n", "21", "--partition",
                          "1,1,2,2", "--seed", "7", "--to", "5", "--ti", "1000")
    assert code == 0
    final = [r for r in recs if r.get("kind") == "final" and r["target"] == 21][0]
    assert final["mf"] >= 3.0


def test_search_usage_error(capsys):
    code, _ = run_main(capsys, "search", "--n", "13", "--partition", "1,x")
    assert code == 2
    code, _ = run_main(capsys, "search", "--n", "12", "--partition", "2")
    assert code == 3  # even length is a domain refusal


SEARCH_ARGS = ["search", "--n", "21", "--partition", "1,1,2,2", "--ti", "300",
               "--to", "6", "--seed", "17"]


def _run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "labskit.cli", *args],
                          capture_output=True, text=True, timeout=120, **kw)


def test_search_byte_identical_streams():
    a = _run_cli(SEARCH_ARGS)
    b = _run_cli(SEARCH_ARGS)
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.strip()


def test_search_timing_flag_adds_fields():
    out = _run_cli(SEARCH_ARGS + ["--timing"])
    assert out.returncode == 0
    records = [json.loads(l) for l in out.stdout.splitlines()]
    assert any("elapsed_ms" in r for r in records)


def test_search_interrupt_flushes_and_exits_130():
    env = dict(os.environ)
    proc = subprocess.Popen(
        [sys.executable, "-m", "labskit.cli", "search", "--n", "61",
         "--partition", "3,2", "--ti", "1000000", "--to", "1000000",
         "--seed", "1"],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True, env=env,
    )
    time.sleep(3.0)
    proc.send_signal(signal.SIGINT)
    out, _err = proc.communicate(timeout=60)
    assert proc.returncode == 130
    records = [json.loads(l) for l in out.splitlines() if l.strip()]
    finals = [r for r in records if r.get("kind") == "final"]
    assert len(finals) == 3  # partial best triple flushed
    summary = [r for r in records if r.get("kind") == "summary"]
    assert summary and summary[0]["interrupted"]


def test_env_overrides_workers():
    env = dict(os.environ, LABSKIT_WORKERS="2", LABSKIT_TIME_LIMIT="3s")
    out = _run_cli(["search", "--n", "21", "--partition", "2,1", "--ti", "200",
                    "--to", "3", "--seed", "1"], env=env)
    assert out.returncode == 0
    records = [json.loads(l) for l in out.stdout.splitlines()]
    summary = [r for r in records if r.get("kind") == "summary"][0]
    assert summary["workers"] == 2
