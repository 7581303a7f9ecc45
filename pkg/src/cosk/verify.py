"""Reproduction suite: every algebraic claim checked numerically, one record per check."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import ctj
from .four_dim import cgt_blocks, einstein_defect, r_hat_blocks, reassemble_r_hat, rigidity_certificate, w_pm_eigen
from .kahler_geom import (
    InfeasibleShiftError,
    KahlerStructure,
    complete_pair,
    four_sectional_identity_defect,
    four_sectional_sum,
    bisectional,
    min_orth_bisectional,
    random_kahler_act,
    random_orthogonal_pairs,
)
from .model_spaces import flat, fubini_study, product_surfaces, standard_complex_structure
from .operators import (
    alpha_sum,
    cosk_spectrum,
    frame_quad_sum,
    is_alpha_nonneg,
    is_alpha_positive,
    min_basis_sums_montecarlo,
    min_frame_quad_sum,
    phi_frame_matrices,
    r_hat_matrix,
    r_ring_gram,
    random_frames,
    shift_constant_curvature,
)
from .tensor_core import SymTwoTensor, random_act, s20_matrices, scalar_curv, weyl_decompose, _s2_stack

FIXTURE_NAMES = ("s2xs2", "cp2_c4", "sphere4")


def default_fixture_dir() -> Path:
    return Path(str(resources.files("cosk") / "data" / "fixtures"))


@dataclass
class Check:
    id: str
    anchor: str
    value: float | None
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass
class VerifyConfig:
    seed: int = 0
    trials: int | None = None
    fixtures: Path = field(default_factory=default_fixture_dir)

    def budget(self, default: int) -> int:
        return default if self.trials is None else max(1, min(default, self.trials))

    def seed_for(self, block: int, i: int) -> int:
        return (self.seed << 24) + (block << 12) + i


def _f(x) -> float | None:
    return None if x is None else float(x)


def _check(id, anchor, value, tol, passed, detail="") -> Check:
    return Check(id, anchor, _f(value), float(tol), bool(passed), detail)


def _spectrum_dev(eigs, expected) -> float:
    return float(np.max(np.abs(np.asarray(eigs) - np.asarray(expected, dtype=float))))


# -- fixtures -----------------------------------------------------------------

def _load(cfg: VerifyConfig, name: str):
    return ctj.read(cfg.fixtures / f"{name}.ctj")[0]


def check_sphere(cfg: VerifyConfig) -> list[Check]:
    rep = cosk_spectrum(_load(cfg, "sphere4").R)
    return [
        _check("sphere4.spectrum", "round four-sphere: all nine eigenvalues equal 1",
               _spectrum_dev(rep.eigs, [1.0] * 9), 1e-12, _spectrum_dev(rep.eigs, [1.0] * 9) <= 1e-12),
        _check("sphere4.max_alpha", "round four-sphere is N-nonnegative with N = 9",
               rep.alpha_max, 0.0, rep.alpha_max == 9.0),
    ]


def check_s2xs2(cfg: VerifyConfig) -> list[Check]:
    doc = _load(cfg, "s2xs2")
    R = doc.R
    rep = cosk_spectrum(R)
    expected = [-1, 0, 0, 0, 0, 1, 1, 1, 1]
    dev = _spectrum_dev(rep.eigs, expected)
    a6 = alpha_sum(rep.eigs, 6)
    eps_dev = max(abs(alpha_sum(rep.eigs, 6 + e) - e) for e in (0.1, 0.5, 1.0))
    nonneg = is_alpha_nonneg(rep, 6)
    gap = abs(R.comp[0, 1, 0, 1] - R.comp[2, 3, 2, 3])
    out = [
        _check("s2xs2.spectrum", "product of unit spheres: spectrum {-1, 0 x4, 1 x4}", dev, 1e-12, dev <= 1e-12),
        _check("s2xs2.alpha6", "product of unit spheres is exactly six-nonnegative", a6, 1e-12, abs(a6) <= 1e-12),
        _check("s2xs2.alpha6_eps", "product of unit spheres: six-plus-epsilon sum equals epsilon",
               eps_dev, 1e-12, eps_dev <= 1e-12),
        _check("s2xs2.max_alpha", "product of unit spheres: optimal alpha is 6",
               rep.alpha_max, 1e-12, rep.alpha_max is not None and abs(rep.alpha_max - 6) <= 1e-12),
        _check("s2xs2.product_rigidity",
               "six-nonnegative product of surfaces has equal factor curvatures R1212 = R3434",
               gap, 1e-12 * max(R.sup_norm, 1.0), nonneg and gap <= 1e-12 * max(R.sup_norm, 1.0),
               f"six-nonnegative: {nonneg}"),
    ]
    if doc.J is not None:
        K = KahlerStructure.build(R, doc.J)
        b = min_orth_bisectional(K, seed=cfg.seed)
        out.append(_check("s2xs2.orth_bisectional", "product of unit spheres: minimal orthogonal bisectional is 0",
                          b, 1e-9, abs(b) <= 1e-9))
    return out


def check_cp2(cfg: VerifyConfig) -> list[Check]:
    doc = _load(cfg, "cp2_c4")
    R = doc.R
    rep = cosk_spectrum(R)
    S = rep.scalar
    dev = _spectrum_dev(rep.eigs, [-2, -2, -2, 4, 4, 4, 4, 4, 4])
    a45 = alpha_sum(rep.eigs, 4.5)
    out = [
        _check("cp2.scalar", "complex projective plane (c = 4): scalar curvature 24", S, 1e-10, abs(S - 24) <= 1e-10),
        _check("cp2.spectrum", "complex projective plane: spectrum {-2 x3, 4 x6}", dev, 1e-10, dev <= 1e-10),
        _check("cp2.max_alpha", "complex projective plane: optimal alpha is 4.5", rep.alpha_max, 1e-12,
               rep.alpha_max is not None and abs(rep.alpha_max - 4.5) <= 1e-12),
        _check("cp2.alpha45_boundary", "complex projective plane sits on the 4.5-nonnegative boundary",
               a45, 1e-10, abs(a45) <= 1e-10),
    ]
    fmin = min_frame_quad_sum(R, seed=cfg.seed)
    out.append(_check("cp2.frame_min", "complex projective plane: minimal four-frame sectional sum is 4",
                      fmin, 1e-6, abs(fmin - 4.0) <= 1e-6))
    if doc.J is not None:
        K = KahlerStructure.build(R, doc.J)
        b = min_orth_bisectional(K, seed=cfg.seed)
        out.append(_check("cp2.orth_bisectional", "complex projective plane: orthogonal bisectional curvature is 2",
                          b, 1e-6, abs(b - 2.0) <= 1e-6))
        ws = w_pm_eigen(R, 1)
        wdev = max(_spectrum_dev(ws.lam, [S / 6, -S / 12, -S / 12]), _spectrum_dev(ws.mu, [0, 0, 0]))
        out.append(_check("cp2.weyl_spectra", "complex projective plane: W+ = (S/6, -S/12, -S/12), W- = 0",
                          wdev, 1e-10, wdev <= 1e-10))
    return out


# -- frame identities -----------------------------------------------------------

def _frame_formulas(R, F) -> tuple[float, float]:
    """Largest deviation of the nine diagonal formulas and of the weighted-sum identity."""
    vals = np.diag(r_ring_gram(R, phi_frame_matrices(F)))

    def c(a, b):
        return R.evaluate(F[a], F[b], F[a], F[b])

    r12, r13, r14, r23, r24, r34 = c(0, 1), c(0, 2), c(0, 3), c(1, 2), c(1, 3), c(2, 3)
    expected = np.array([0.5 * (-r12 - r34 + r13 + r24 + r14 + r23),
                         r13, r14, r23, r24, r12, r34, r12, r34])
    key = vals[:5].sum() + 0.25 * vals[5:].sum()
    return float(np.max(np.abs(vals - expected))), abs(key - 1.5 * frame_quad_sum(R, F))


def check_frame_formulas(cfg: VerifyConfig) -> list[Check]:
    n_t, n_f = cfg.budget(100), cfg.budget(20)
    worst_nine = worst_key = 0.0
    for t in range(n_t):
        R = random_act(4, cfg.seed_for(1, t))
        frames = random_frames(np.random.default_rng(cfg.seed_for(2, t)), n_f, 4)
        for F in frames:
            d9, dk = _frame_formulas(R, F)
            worst_nine = max(worst_nine, d9 / R.norm)
            worst_key = max(worst_key, dk / R.norm)
    return [
        _check("frame.nine_formulas", "the nine diagonal values on an adapted four-frame basis",
               worst_nine, 1e-12, worst_nine <= 1e-12, f"{n_t} tensors x {n_f} frames"),
        _check("frame.weighted_sum", "weighted sum of the nine values equals 3/2 of the four-sectional sum",
               worst_key, 1e-12, worst_key <= 1e-12, f"{n_t} tensors x {n_f} frames"),
    ]


# -- six-nonnegativity implies nonnegative four-sectional sums ---------------

def check_four_sectional(cfg: VerifyConfig) -> list[Check]:
    count = cfg.budget(500)
    worst = math.inf
    strict_margin = math.inf
    strict_tested = 0
    worst_strict_delta = math.inf
    for t in range(count):
        n = 4 if t % 2 == 0 else 5
        R0 = random_act(n, cfg.seed_for(3, t))
        rep = cosk_spectrum(R0)
        # exact shift onto the six-nonnegative boundary
        R = shift_constant_curvature(R0, -alpha_sum(rep.eigs, 6) / 6)
        if not is_alpha_nonneg(R, 6, 1e-12):
            worst = -math.inf
            continue
        m = min_frame_quad_sum(R, samples=200, seed=cfg.seed_for(4, t))
        worst = min(worst, m / R.sup_norm)
        if t % 5 == 0:
            # strictly six-positive: six-sum = 2e-3 times the original spectral scale
            Rs = shift_constant_curvature(R, 2e-3 * rep.scale / 6)
            if not is_alpha_positive(Rs, 6, 1e-3):
                continue
            strict_tested += 1
            delta = 2.0 / 3.0 * alpha_sum(cosk_spectrum(Rs).eigs, 6)
            ms = min_frame_quad_sum(Rs, samples=200, seed=cfg.seed_for(5, t))
            worst_strict_delta = min(worst_strict_delta, delta)
            strict_margin = min(strict_margin, (ms - delta) / Rs.sup_norm)
    return [
        _check("four_sectional.nonneg", "six-nonnegative tensors have nonnegative four-sectional sums",
               worst, 1e-8, worst >= -1e-8, f"{count} tensors, n in {{4, 5}}, exact shift to the boundary"),
        _check("four_sectional.strict", "six-positive tensors have four-sectional sums at least 2/3 of the six-sum",
               strict_margin, 1e-10, strict_tested > 0 and worst_strict_delta > 0 and strict_margin >= -1e-10,
               f"{strict_tested} tensors; smallest bound {worst_strict_delta:.3e}"),
    ]


# -- Kaehler: orthogonal bisectional curvature ------------------------------------

def _kahler_fuzz(cfg: VerifyConfig, m: int, count: int, block: int):
    worst = math.inf
    worst_identity = 0.0
    infeasible = 0
    for t in range(count):
        try:
            K = random_kahler_act(m, cfg.seed_for(block, t), ensure_six_nonneg=True)
        except InfeasibleShiftError:
            infeasible += 1
            continue
        val, x, y = min_orth_bisectional(K, seed=cfg.seed_for(block + 1, t), return_pair=True)
        worst = min(worst, val / K.R.sup_norm)
        X, Y = random_orthogonal_pairs(np.random.default_rng(cfg.seed_for(block + 2, t)), K.J.J, 8)
        for a, b in [(x, y), *zip(X, Y)]:
            a, b = complete_pair(K.J, a, b)
            worst_identity = max(worst_identity, four_sectional_identity_defect(K, a, b) / K.R.norm)
    return worst, worst_identity, infeasible


def check_bisectional(cfg: VerifyConfig) -> list[Check]:
    out = []
    identity = 0.0
    for m, default, block in ((2, 100, 10), (3, 50, 20)):
        count = cfg.budget(default)
        worst, ident, infeasible = _kahler_fuzz(cfg, m, count, block)
        identity = max(identity, ident)
        feasible = count - infeasible
        detail = f"{feasible} of {count} samples shifted into six-nonnegativity"
        if infeasible:
            detail += f"; {infeasible} admit no six-nonnegative Fubini-Study shift"
        out.append(_check(f"kahler.orth_bisectional_m{m}",
                          f"six-nonnegative Kaehler tensors (m = {m}) have nonnegative orthogonal bisectional curvature",
                          None if feasible == 0 else worst, 1e-8,
                          infeasible == 0 and worst >= -1e-8, detail))
    out.append(_check("kahler.four_sectional_identity",
                      "twice the bisectional curvature equals the four-sectional sum on orthogonal pairs",
                      identity, 1e-12, identity <= 1e-12))
    # chain: the frame {X, JX, Y, JY} carries twice the bisectional curvature
    K = random_kahler_act(2, cfg.seed_for(30, 0))
    X, Y = random_orthogonal_pairs(np.random.default_rng(cfg.seed_for(31, 0)), K.J.J, 16)
    chain = 0.0
    for a, b in zip(X, Y):
        a, b = complete_pair(K.J, a, b)
        F = np.array([a, K.J.J @ a, b, K.J.J @ b])
        chain = max(chain, abs(frame_quad_sum(K.R, F) - 2 * bisectional(K, a, b)) / K.R.norm)
    out.append(_check("kahler.frame_chain", "four-sectional sum on {X, JX, Y, JY} is twice the bisectional curvature",
                      chain, 1e-12, chain <= 1e-12))
    return out


# -- products of surfaces ---------------------------------------------------------

def check_product_grid(cfg: VerifyConfig) -> list[Check]:
    grid = (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
    wrong = []
    for k1 in grid:
        for k2 in grid:
            got = is_alpha_nonneg(product_surfaces(k1, k2), 6)
            if got != (k1 == k2 and k1 >= 0):
                wrong.append((k1, k2))
    return [_check("product.grid", "a product of two surfaces is six-nonnegative iff the curvatures agree and are >= 0",
                   len(wrong), 0, not wrong, f"mismatches: {wrong}" if wrong else "36 grid points")]


# -- four-dimensional normal form -----------------------------------------------

def _einstein_part(R):
    wd = weyl_decompose(R)
    return type(wd)(wd.scalar, SymTwoTensor(np.zeros((R.n, R.n))), wd.W).reassemble()


def check_normal_form(cfg: VerifyConfig) -> list[Check]:
    count = cfg.budget(200)
    d_def = o_skew = reasm = 0.0
    mismatched = tested = 0
    for t in range(count):
        R = random_act(4, cfg.seed_for(40, t))
        if t % 2:
            R = _einstein_part(R)
        blk = cgt_blocks(R)
        d_def = max(d_def, blk.d_defect / R.sup_norm)
        o_skew = max(o_skew, blk.o_skew_defect / R.norm)
        for o in (1, -1):
            reasm = max(reasm, float(np.max(np.abs(reassemble_r_hat(*r_hat_blocks(R, o), o) - r_hat_matrix(R)))))
        e = einstein_defect(R) / R.norm
        if 1e-10 < e < 1e-6:
            continue
        tested += 1
        if (e <= 1e-10) != (blk.o_norm <= 1e-10 * R.norm):
            mismatched += 1
    return [
        _check("normal_form.diagonal", "diagonal blocks are -(lambda_a + mu_b) + S/12", d_def, 1e-9, d_def <= 1e-9),
        _check("normal_form.off_diagonal_skew", "off-diagonal blocks are skew-symmetric", o_skew, 1e-12, o_skew <= 1e-12),
        _check("normal_form.einstein_iff", "off-diagonal blocks vanish iff the tensor is Einstein",
               mismatched, 0, mismatched == 0 and tested > 0, f"{tested} tensors outside the margin band"),
        _check("normal_form.reassembly", "R-hat reassembles from its self-dual/anti-self-dual blocks",
               reasm, 1e-12, reasm <= 1e-12),
    ]


# -- Kaehler surfaces: rigidity -------------------------------------------------

def check_kahler_surfaces(cfg: VerifyConfig) -> list[Check]:
    count = cfg.budget(100)
    worst45 = -math.inf
    tested = 0
    mu3_margin = mu23_margin = math.inf
    for t in range(count):
        K = random_kahler_act(2, cfg.seed_for(50, t), ensure_six_nonneg=(t % 2 == 0))
        R = K.R
        rep = cosk_spectrum(R)
        cert = rigidity_certificate(K)
        if cert.einstein_defect + cert.w_minus_norm >= 1e-3 * R.sup_norm:
            tested += 1
            worst45 = max(worst45, alpha_sum(rep.eigs, 4.5) / rep.scale)
        if is_alpha_nonneg(rep, 6):
            ws = w_pm_eigen(R, cert.orientation)
            S, nrm = ws.scalar, R.norm
            mu3_margin = min(mu3_margin, (ws.mu[2] + S / 12) / nrm)
            mu23_margin = min(mu23_margin, (ws.mu[1] + ws.mu[2] + S / 6) / nrm)
    fs_cert = rigidity_certificate(KahlerStructure.build(*fubini_study(2, 4.0)))
    flat_cert = rigidity_certificate(KahlerStructure.build(flat(4), standard_complex_structure(2)))
    neg = fubini_study(2, -4.0)
    neg_cert = rigidity_certificate(KahlerStructure.build(*neg))
    neg_ok = neg_cert.einstein_and_half_flat and neg_cert.scalar < 0 and is_alpha_nonneg(-neg[0], 4.5)
    return [
        _check("kahler_surface.contrapositive",
               "non-Einstein or W- != 0 Kaehler surfaces fail 4.5-nonnegativity",
               worst45, 0.0, tested > 0 and worst45 < 0, f"{tested} of {count} samples above the defect threshold"),
        _check("kahler_surface.certificates", "Fubini-Study certifies as cp2-type and the flat tensor as flat",
               None, 0.0, fs_cert.verdict == "cp2-type" and flat_cert.verdict == "flat",
               f"{fs_cert.verdict}, {flat_cert.verdict}"),
        _check("kahler_surface.sign_flip", "negative holomorphic curvature: -R is 4.5-nonnegative, Einstein, W- = 0, S < 0",
               neg_cert.scalar, 0.0, neg_ok, neg_cert.verdict),
        _check("kahler_surface.mu3", "six-nonnegativity forces mu_3 >= -S/12",
               mu3_margin, 1e-9, mu3_margin >= -1e-9),
        _check("kahler_surface.mu2_mu3", "six-nonnegativity forces mu_2 + mu_3 >= -S/6",
               mu23_margin, 1e-9, mu23_margin >= -1e-9),
    ]


# -- traces and the Ky Fan minimum ------------------------------------------------

def check_traces(cfg: VerifyConfig) -> list[Check]:
    count = cfg.budget(200)
    tr = gg = s20 = 0.0
    for t in range(count):
        n = 3 + t % 4
        R = random_act(n, cfg.seed_for(60, t))
        S = scalar_curv(R)
        tr = max(tr, abs(np.trace(r_ring_gram(R, _s2_stack(n))) - S / 2) / R.norm)
        gg = max(gg, abs(r_ring_gram(R, np.eye(n)[None])[0, 0] + S) / R.norm)
        s20 = max(s20, abs(np.trace(r_ring_gram(R, s20_matrices(n))) - (S / 2 + S / n)) / R.norm)
    return [
        _check("trace.full", "trace over all symmetric two-tensors is S/2", tr, 1e-11, tr <= 1e-11),
        _check("trace.metric", "the metric direction carries -S", gg, 1e-11, gg <= 1e-11),
        _check("trace.traceless", "trace over traceless tensors is S/2 + S/n", s20, 1e-11, s20 <= 1e-11),
    ]


def check_ky_fan(cfg: VerifyConfig) -> list[Check]:
    count, trials = cfg.budget(50), cfg.budget(1000)
    alphas = (2.0, 4.5, 6.0)
    below = eq = 0.0
    for t in range(count):
        R = random_act(4, cfg.seed_for(70, t))
        rep = cosk_spectrum(R)
        exact = np.array([alpha_sum(rep.eigs, a) for a in alphas])
        mc = min_basis_sums_montecarlo(R, alphas, trials=trials, seed=cfg.seed_for(71, t) * 1000)
        below = max(below, float(np.max(exact - mc)) / rep.scale)
        eq = max(eq, float(np.max(np.abs(mc - exact))) / rep.scale)
    return [
        _check("ky_fan.lower_bound", "basis sums never undercut the eigenvalue partial sums",
               below, 1e-12, below <= 1e-12, f"{count} tensors x {trials} bases"),
        _check("ky_fan.equality", "the eigenbasis attains the partial sum", eq, 1e-12, eq <= 1e-12),
    ]


def check_roundtrip(cfg: VerifyConfig) -> list[Check]:
    bad = 0
    for t in range(cfg.budget(20)):
        R = random_act(3 + t % 6, cfg.seed_for(80, t))
        if not np.array_equal(ctj.loads(ctj.dumps(R)).R.comp, R.comp):
            bad += 1
    for name in FIXTURE_NAMES:
        text = (cfg.fixtures / f"{name}.ctj").read_text()
        doc = ctj.loads(text)
        if ctj.dumps(doc.R, doc.J, doc.metadata) != text:
            bad += 1
    return [_check("ctj.roundtrip", "CTJ write and read are mutually inverse, bit for bit", bad, 0, bad == 0)]


SUITE = (
    check_sphere, check_s2xs2, check_cp2, check_frame_formulas, check_four_sectional,
    check_bisectional, check_product_grid, check_normal_form, check_kahler_surfaces,
    check_traces, check_ky_fan, check_roundtrip,
)


def run_suite(cfg: VerifyConfig | None = None) -> list[Check]:
    cfg = cfg or VerifyConfig()
    checks: list[Check] = []
    for fn in SUITE:
        try:
            checks.extend(fn(cfg))
        except Exception as exc:  # a crashing group is reported as a failed check
            checks.append(_check(fn.__name__.removeprefix("check_") + ".error", "check group raised",
                                 None, 0.0, False, f"{type(exc).__name__}: {exc}"))
    return checks


def as_dicts(checks: list[Check]) -> list[dict]:
    return [asdict(c) for c in checks]
