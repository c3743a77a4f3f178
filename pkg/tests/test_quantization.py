import math

import numpy as np
import pytest

from kgbound import (BranchError, CouplingMode, DomainError, ParticleSpec,
                     PotentialSpec, QuantumNumbers, SpectrumEntry,
                     build_residual_spec, case_parameters, constant_mass_b,
                     residual, sign_validity)
from kgbound import _kernels
from kgbound.quantization import (DEFAULT_WINDOW_MARGIN, evaluate,
                                  evaluate_grid, physical_window)


def make_spec(constants, pion, mode, n=0, l=0, delta=0.0, lambda_b=0.0,
              branch="plus", A=200.0):
    pot = PotentialSpec.from_lambda_b(A=A, delta=delta, lambda_b=lambda_b,
                                      particle=pion, mode=mode)
    return build_residual_spec(constants, pion, pot, QuantumNumbers(n=n, l=l),
                               branch=branch)


def test_physical_window_is_symmetric_without_delta():
    lo, hi = physical_window(134.977, 0.0)
    assert lo == -134.977 + DEFAULT_WINDOW_MARGIN
    assert hi == 134.977 - DEFAULT_WINDOW_MARGIN


def test_physical_window_clips_where_energy_factor_dies():
    lo, hi = physical_window(134.977, 0.01)
    assert lo > -134.977 + DEFAULT_WINDOW_MARGIN
    assert 1.0 + 0.01 * lo > 0.0
    assert hi == 134.977 - DEFAULT_WINDOW_MARGIN

    lo, hi = physical_window(134.977, -0.01)
    assert hi < 134.977 - DEFAULT_WINDOW_MARGIN
    assert 1.0 - 0.01 * hi > 0.0
    assert lo == -134.977 + DEFAULT_WINDOW_MARGIN


def test_physical_window_rejects_bad_margin():
    with pytest.raises(DomainError):
        physical_window(134.977, 0.0, margin=0.0)
    with pytest.raises(DomainError):
        physical_window(134.977, 0.0, margin=200.0)


def test_residual_spec_fields(constants, pion):
    spec = make_spec(constants, pion, CouplingMode.EMES, n=2, l=1, delta=0.003)
    assert spec.n_plus_half == 2.5
    assert spec.ll1 == 2.0
    assert spec.alpha == 200.0 / constants.hbar_c
    assert spec.window == physical_window(pion.m0c2, 0.003)
    assert spec.describe_branch() == "plus"
    assert make_spec(constants, pion, CouplingMode.EMES,
                     branch="minus").describe_branch() == "minus"


def test_residual_matches_case_parameters(constants, pion):
    pot = PotentialSpec.from_lambda_b(A=200.0, delta=-0.003, lambda_b=0.003,
                                      particle=pion, mode=CouplingMode.EMES)
    qn = QuantumNumbers(n=1, l=1)
    spec = build_residual_spec(constants, pion, pot, qn)
    for E in (-90.0, 5.0, 110.0):
        case = case_parameters(constants, pion, pot, qn, E)
        lhs = math.sqrt(case.tau_sq) * constants.hbar_c
        rhs = spec.alpha * (spec.c0 + spec.c1 * E) / (qn.n + case.eta + 1.0)
        assert residual(spec, E) == pytest.approx(lhs - rhs, rel=1e-12,
                                                  abs=1e-12)


def test_residual_raises_by_failure_kind(constants, pion):
    spec = make_spec(constants, pion, CouplingMode.EMES)
    with pytest.raises(DomainError):
        residual(spec, 140.0)
    spec = make_spec(constants, pion, CouplingMode.EMES, delta=0.01)
    with pytest.raises(DomainError):
        residual(spec, -110.0)
    spec = make_spec(constants, pion, CouplingMode.PURE_VECTOR, l=0)
    with pytest.raises(BranchError):
        residual(spec, 0.0)


def test_sign_validity(constants, pion):
    # emos with no mass coupling keeps c0 + c1 E < 0 across the window,
    # so every candidate root fails the sign convention
    emos = make_spec(constants, pion, CouplingMode.EMOS)
    emes = make_spec(constants, pion, CouplingMode.EMES)
    ps = make_spec(constants, pion, CouplingMode.PURE_SCALAR)
    for E in (-120.0, 0.0, 120.0):
        assert not sign_validity(emos, E)
        assert sign_validity(emes, E)
        assert sign_validity(ps, E)
    assert not sign_validity(emes, 200.0)


def test_evaluate_reports_statuses(constants, pion):
    spec = make_spec(constants, pion, CouplingMode.EMES)
    assert evaluate(spec, 0.0)[3] == _kernels.STATUS_OK
    assert evaluate(spec, 140.0)[3] == _kernels.STATUS_WINDOW
    spec = make_spec(constants, pion, CouplingMode.EMES, delta=0.01)
    assert evaluate(spec, -110.0)[3] == _kernels.STATUS_ENERGY_FACTOR
    spec = make_spec(constants, pion, CouplingMode.PURE_VECTOR)
    assert evaluate(spec, 0.0)[3] == _kernels.STATUS_COMPLEX_ETA


def test_evaluate_grid_masks_invalid_energies(constants, pion):
    spec = make_spec(constants, pion, CouplingMode.EMES)
    E = np.array([-200.0, 0.0, 200.0])
    res, rhs, den, status = evaluate_grid(spec, E)
    assert list(status) == [_kernels.STATUS_WINDOW, _kernels.STATUS_OK,
                            _kernels.STATUS_WINDOW]
    assert math.isnan(res[0]) and math.isnan(res[2])
    assert math.isfinite(res[1]) and math.isfinite(rhs[1]) and den[1] > 0.0


def test_lhs_rhs_agree_at_converged_roots(solve_block, constants, pion):
    table = solve_block("emes", 0.0, 0.0)
    pot = PotentialSpec.from_lambda_b(A=200.0, delta=0.0, lambda_b=0.0,
                                      particle=pion, mode=CouplingMode.EMES)
    checked = 0
    for entry in table.entries:
        if entry.status != "converged":
            continue
        spec = build_residual_spec(constants, pion, pot,
                                   QuantumNumbers(n=entry.n, l=entry.l))
        res, rhs, _, status = evaluate(spec, entry.energy)
        assert status == _kernels.STATUS_OK
        assert abs(res) <= 1e-8
        assert math.isclose(res + rhs, rhs, rel_tol=1e-8)
        checked += 1
    assert checked >= 10


def test_constant_mass_b():
    hc = 197.3269804
    assert constant_mass_b(200.0, 200.0) == 200.0 / (hc * 200.0)
    assert constant_mass_b(200.0, -100.0) == -100.0 / (hc * 200.0)
    assert constant_mass_b(200.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        constant_mass_b(0.0, 100.0)


def test_spectrum_entry_validation():
    good = dict(n=0, l=0, line="lower", branch="plus", energy=-1.0,
                residual_at_root=0.0, iterations=3, status="converged")
    SpectrumEntry(**good)
    with pytest.raises(DomainError):
        SpectrumEntry(**{**good, "line": "middle"})
    with pytest.raises(DomainError):
        SpectrumEntry(**{**good, "status": "done"})
    with pytest.raises(DomainError):
        SpectrumEntry(**{**good, "energy": None})
    with pytest.raises(DomainError):
        SpectrumEntry(**{**good, "energy": math.inf})
    absent = SpectrumEntry(n=0, l=0, line="upper", branch="plus", energy=None,
                           residual_at_root=None, iterations=0, status="absent",
                           detail="why")
    assert absent.energy is None
