"""Acceptance criteria, one test per criterion.

The fuzz-heavy criteria read their numbers from a single ``verify-paper`` run
(shared by the module fixture); the model-space criteria are recomputed here
directly from the library as well.
"""

import json

import numpy as np
import pytest

from cosk import ctj
from cosk.cli import main
from cosk.model_spaces import fubini_study, product_surfaces, space_form
from cosk.operators import alpha_sum, cosk_spectrum, is_alpha_nonneg, r_ring_gram
from cosk.tensor_core import _s2_stack, random_act, scalar_curv
from cosk.verify import FIXTURE_NAMES, default_fixture_dir


def _verify(tmp_path, *extra):
    out = tmp_path / f"report{len(list(tmp_path.iterdir()))}.json"
    code = main(["verify-paper", "--json", str(out), *map(str, extra)])
    return code, out.read_bytes()


@pytest.fixture(scope="module")
def full_run(tmp_path_factory):
    code, raw = _verify(tmp_path_factory.mktemp("verify"))
    rep = json.loads(raw)
    return code, {c["id"]: c for c in rep["results"]["checks"]}


def _status(checks, ids):
    failed = [i for i in ids if not checks[i]["passed"]]
    parts = [f"{i}={checks[i]['value']:.3g}" if checks[i]["value"] is not None else i for i in ids]
    detail = "; ".join(parts)
    if failed:
        detail += "; failing: " + ", ".join(failed)
        for i in failed:
            if checks[i]["detail"]:
                detail += f" [{checks[i]['detail']}]"
    return not failed, detail


def test_criterion_01_round_sphere(full_run, criterion):
    rep = cosk_spectrum(space_form(4, 1.0))
    dev = float(np.max(np.abs(rep.eigs - 1.0)))
    ok = dev <= 1e-12 and rep.alpha_max == rep.N == 9
    ok_v, detail = _status(full_run[1], ["sphere4.spectrum", "sphere4.max_alpha"])
    assert criterion(1, "round four-sphere spectrum and max alpha", ok and ok_v, f"deviation {dev:.1e}; {detail}")


def test_criterion_02_product_of_spheres(full_run, criterion):
    rep = cosk_spectrum(product_surfaces(1.0, 1.0))
    dev = float(np.max(np.abs(rep.eigs - [-1, 0, 0, 0, 0, 1, 1, 1, 1])))
    a6 = alpha_sum(rep.eigs, 6)
    eps = max(abs(alpha_sum(rep.eigs, 6 + e) - e) for e in (0.1, 0.5, 1.0))
    ok = dev <= 1e-12 and abs(a6) <= 1e-12 and eps <= 1e-12
    ok_v, detail = _status(full_run[1], ["s2xs2.spectrum", "s2xs2.alpha6", "s2xs2.alpha6_eps"])
    assert criterion(2, "S2 x S2 spectrum and (6 + eps) sums", ok and ok_v, detail)


def test_criterion_03_complex_projective_plane(full_run, criterion):
    rep = cosk_spectrum(fubini_study(2, 4.0)[0])
    dev = float(np.max(np.abs(rep.eigs - [-2, -2, -2, 4, 4, 4, 4, 4, 4])))
    ok = abs(rep.scalar - 24) <= 1e-10 and dev <= 1e-10 and abs(rep.alpha_max - 4.5) <= 1e-12
    ok_v, detail = _status(full_run[1], ["cp2.scalar", "cp2.spectrum", "cp2.max_alpha"])
    assert criterion(3, "CP2 scalar curvature, spectrum, max alpha", ok and ok_v, detail)


def test_criterion_04_frame_formulas(full_run, criterion):
    ok, detail = _status(full_run[1], ["frame.nine_formulas", "frame.weighted_sum"])
    assert criterion(4, "nine frame formulas and the weighted-sum identity", ok, detail)


def test_criterion_05_four_sectional_sums(full_run, criterion):
    ok, detail = _status(full_run[1], ["four_sectional.nonneg", "four_sectional.strict"])
    assert criterion(5, "six-nonnegative implies nonnegative four-sectional sums", ok, detail)


def test_criterion_06_orthogonal_bisectional(full_run, criterion):
    ok, detail = _status(full_run[1], ["kahler.orth_bisectional_m2", "kahler.orth_bisectional_m3",
                                       "kahler.four_sectional_identity"])
    assert criterion(6, "six-nonnegative Kaehler tensors: orthogonal bisectional >= 0", ok, detail)


def test_criterion_07_product_grid(full_run, criterion):
    grid = (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
    wrong = [(a, b) for a in grid for b in grid
             if is_alpha_nonneg(product_surfaces(a, b), 6) != (a == b and a >= 0)]
    ok_v, detail = _status(full_run[1], ["product.grid"])
    assert criterion(7, "products of surfaces: six-nonnegative iff equal and >= 0", not wrong and ok_v,
                     f"mismatches {wrong}; {detail}")


def test_criterion_08_normal_form(full_run, criterion):
    ok, detail = _status(full_run[1], ["normal_form.diagonal", "normal_form.off_diagonal_skew",
                                       "normal_form.einstein_iff", "normal_form.reassembly"])
    assert criterion(8, "9 x 9 block normal form in dimension four", ok, detail)


def test_criterion_09_kahler_surface_rigidity(full_run, criterion):
    ok, detail = _status(full_run[1], ["kahler_surface.contrapositive", "kahler_surface.certificates"])
    assert criterion(9, "Kaehler surfaces off the CP2 type fail 4.5-nonnegativity", ok, detail)


def test_criterion_10_anti_self_dual_bounds(full_run, criterion):
    ok, detail = _status(full_run[1], ["kahler_surface.mu3", "kahler_surface.mu2_mu3"])
    assert criterion(10, "six-nonnegative Kaehler surfaces: bounds on W- eigenvalues", ok, detail)


def test_criterion_11_traces(full_run, criterion):
    worst = 0.0
    for t in range(200):
        n = 3 + t % 4
        R = random_act(n, 10_000 + t)
        S = scalar_curv(R)
        full = np.trace(r_ring_gram(R, _s2_stack(n))) - S / 2
        metric = r_ring_gram(R, np.eye(n)[None])[0, 0] + S
        worst = max(worst, abs(full) / R.norm, abs(metric) / R.norm)
    ok_v, detail = _status(full_run[1], ["trace.full", "trace.metric"])
    assert criterion(11, "trace identities over S2(V) and on the metric", worst <= 1e-11 and ok_v,
                     f"independent batch {worst:.1e}; {detail}")


def test_criterion_12_ky_fan(full_run, criterion):
    ok, detail = _status(full_run[1], ["ky_fan.lower_bound", "ky_fan.equality"])
    assert criterion(12, "Monte Carlo basis sums bounded by the eigenvalue partial sums", ok, detail)


def test_criterion_13_infrastructure(full_run, tmp_path, criterion):
    code, checks = full_run
    roundtrip = checks["ctj.roundtrip"]["passed"]

    first = _verify(tmp_path, "--trials", 10, "--seed", 7)
    second = _verify(tmp_path, "--trials", 10, "--seed", 7)
    deterministic = first[1] == second[1]

    bad = tmp_path / "corrupted"
    bad.mkdir()
    for name in FIXTURE_NAMES:
        (bad / f"{name}.ctj").write_bytes((default_fixture_dir() / f"{name}.ctj").read_bytes())
    doc, _ = ctj.read(bad / "s2xs2.ctj")
    comp = doc.R.comp.copy()
    for idx, s in (((2, 3, 2, 3), 1), ((3, 2, 3, 2), 1), ((2, 3, 3, 2), -1), ((3, 2, 2, 3), -1)):
        comp[idx] = 2.0 * s
    ctj.write(bad / "s2xs2.ctj", type(doc.R)(4, comp), doc.J, doc.metadata)
    bad_code, bad_raw = _verify(tmp_path, "--trials", 10, "--fixtures", bad)
    bad_checks = {c["id"]: c for c in json.loads(bad_raw)["results"]["checks"]}
    corrupted = bad_code == 1 and not bad_checks["s2xs2.product_rigidity"]["passed"]

    failing = [i for i, c in checks.items() if not c["passed"]]
    parts = {
        "ctj round-trip": roundtrip,
        "deterministic report": deterministic,
        "default run exits 0": code == 0,
        "corrupted fixture exits 1": corrupted,
    }
    detail = "; ".join(f"{k}: {'ok' if v else 'no'}" for k, v in parts.items())
    if code != 0:
        detail += f" [default run exit {code}, failing checks {', '.join(failing)}]"
    assert criterion(13, "CTJ exactness, deterministic reports, verify-paper exit codes", all(parts.values()), detail)
