"""One test per acceptance criterion; each prints a pass/fail line."""

import os
import subprocess
import sys

import pytest

import acceptance_suite as suite
from conftest import ACCEPTANCE_LINES
from vlab.reports import digest

DIGESTS = {}

SUMMARY = {
    1: lambda f: (f"{f[0]['sets_checked']} sets, {f[0]['membership_pairs']} membership pairs, "
                  f"mismatches {f[0]['decode_mismatches'] + f[0]['membership_mismatches'] + f[0]['equality_mismatches']}"),
    2: lambda f: (f"{f[0]['coding_pairs']} coding pairs, "
                  f"{sum(r['mutants'] for r in f[1]['mutants'].values())} mutants, "
                  f"misclassified {sum(r['misclassified'] for r in f[1]['mutants'].values())}"),
    3: lambda f: f"checked {f[0]['checked']}, mismatches {f[0]['mismatches']}",
    4: lambda f: (f"{f[0]['proofs']} proofs, rejected valid {f[0]['rejected_valid']}, "
                  f"accepted mutants {f[1]['accepted_mutants']}"),
    5: lambda f: (f"{f[0]['posets']} posets, {f[0]['checks']} checks, "
                  f"disagreements {f[0]['disagreements']}"),
    6: lambda f: (f"{len(f)} theories, violations {sum(r['violation'] for r in f)}, "
                  f"refuted {sum(r['refuted'] for r in f)}, models {sum(r['model_found'] for r in f)}"),
    7: lambda f: (f"{f[0]['proofs']} proofs, rank failures {f[0]['rank_failures']}, "
                  f"max rank {f[0]['max_rank']}, mp join constant {f[0]['mp_join_constant']}"),
    8: lambda f: f"{len(f)} bases, failures {sum(not r['ok'] for r in f)}",
    9: lambda f: (f"{sum(r.get('pairs', 0) for r in f)} extension pairs, "
                  f"failures {sum(r.get('failures', 0) for r in f)}"),
}


def record(n, passed, detail):
    line = f"criterion {n} {'PASS' if passed else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.parametrize("n", sorted(suite.CRITERIA))
def test_criterion(n):
    report = suite.run(n)
    DIGESTS[n] = digest(report.body())
    passed = report.verdicts["pass"]
    record(n, passed, f"{SUMMARY[n](report.findings)} ({report.runtime:.1f}s)")
    assert passed, report.to_text()


def test_criterion_10_determinism():
    """A second run in a fresh interpreter, with a different hash seed, must
    give byte-identical report bodies."""
    missing = [n for n in suite.CRITERIA if n not in DIGESTS]
    for n in missing:
        DIGESTS[n] = digest(suite.run(n).body())
    env = dict(os.environ, PYTHONHASHSEED="12345")
    here = os.path.dirname(__file__)
    out = subprocess.run([sys.executable, os.path.join(here, "acceptance_suite.py")],
                         capture_output=True, text=True, env=env, cwd=here, check=True).stdout
    other = {int(n): d for n, d in (line.split() for line in out.splitlines())}
    differing = sorted(n for n in DIGESTS if DIGESTS[n] != other.get(n))
    passed = not differing
    record(10, passed, f"{len(DIGESTS)} report bodies compared across two runs, differing {differing}")
    assert passed
