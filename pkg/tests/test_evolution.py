import numpy as np
import pytest

from qwline import (
    CoinAngles,
    CoinField,
    InitialState,
    TotalityError,
    coin_matrix,
    evolve,
    load_coin_field_csv,
    localized_state,
    pmf,
    save_coin_field_csv,
    step_homogeneous,
    step_inhomogeneous,
)


def test_norm_preserved_over_long_run():
    """No renormalization: drift over 1000 steps stays at rounding level."""
    c = CoinAngles(theta=0.9, alpha=0.3, beta=-1.2, chi=0.7)
    state = evolve(InitialState(eta=0.6, gamma=1.9), c, 1000)
    assert abs(state.norm() - 1.0) < 1e-10
    state.validate(atol=1e-10)


def test_parity_and_cone_zeros_are_exact():
    c = CoinAngles(theta=np.pi / 5, alpha=0.1, beta=0.2, chi=0.3)
    state = evolve(InitialState(eta=0.4), c, 25)
    odd = np.arange(1, 2 * 25 + 1, 2)
    assert np.all(state.plus_amps[odd] == 0)
    assert np.all(state.minus_amps[odd] == 0)
    # The leftmost site is only reachable by the left-mover and vice versa.
    assert state.plus_amps[0] == 0
    assert state.minus_amps[-1] == 0


def test_single_step_matches_coin_matrix():
    c = CoinAngles(theta=0.8, alpha=-0.4, beta=0.9, chi=0.2)
    u = coin_matrix(c)
    init = InitialState(eta=0.3, gamma=-1.1)
    state = step_homogeneous(localized_state(init), c)
    spinor = np.array([np.cos(0.3), np.exp(-1.1j) * np.sin(0.3)])
    mixed = u @ spinor
    p_right, _ = state.amplitudes_at(1)
    _, m_left = state.amplitudes_at(-1)
    assert p_right == pytest.approx(mixed[0], abs=1e-15)
    assert m_left == pytest.approx(mixed[1], abs=1e-15)
    p0, m0 = state.amplitudes_at(0)
    assert p0 == 0 and m0 == 0


def test_homogeneous_step_is_bit_identical_to_lifted_step():
    c = CoinAngles(theta=1.1, alpha=0.5, beta=-0.3, chi=0.15)
    state = evolve(InitialState(eta=1.0, gamma=0.2), c, 9)
    a = step_homogeneous(state, c)
    b = step_inhomogeneous(state, CoinField.homogeneous(c))
    assert np.array_equal(a.plus_amps, b.plus_amps)
    assert np.array_equal(a.minus_amps, b.minus_amps)


def test_step_is_linear():
    c = CoinAngles(theta=0.7, alpha=0.2, beta=0.4, chi=-0.6)
    s1 = evolve(InitialState(eta=0.25), c, 4)
    s2 = evolve(InitialState(eta=1.2, gamma=2.0), c, 4)
    from qwline import SpinorField

    a, b = 0.3 - 0.4j, 1.1 + 0.2j
    combo = SpinorField(
        t=4,
        plus_amps=a * s1.plus_amps + b * s2.plus_amps,
        minus_amps=a * s1.minus_amps + b * s2.minus_amps,
    )
    stepped = step_homogeneous(combo, c)
    e1 = step_homogeneous(s1, c)
    e2 = step_homogeneous(s2, c)
    assert np.allclose(stepped.plus_amps, a * e1.plus_amps + b * e2.plus_amps,
                       atol=1e-14)
    assert np.allclose(stepped.minus_amps, a * e1.minus_amps + b * e2.minus_amps,
                       atol=1e-14)


def test_evolve_records_trajectory():
    c = CoinAngles(theta=np.pi / 4)
    state, records = evolve(InitialState(), c, 12, record_trajectory=True,
                            ell=2.0)
    assert len(records) == 13
    assert [r.t for r in records] == list(range(13))
    assert records[0].mean_x == 0.0
    # Lattice spacing scales the position observable linearly.
    _, unit_records = evolve(InitialState(), c, 12, record_trajectory=True)
    assert records[7].mean_x == pytest.approx(2.0 * unit_records[7].mean_x)
    assert state.t == 12


def test_evolve_rejects_negative_horizon():
    with pytest.raises(ValueError, match="non-negative"):
        evolve(InitialState(), CoinAngles(0.5), -1)


def test_tabulated_coin_exhaustion_names_site(tmp_path):
    path = tmp_path / "coin.csv"
    save_coin_field_csv(CoinField.homogeneous(CoinAngles(0.6)), t_max=5,
                        path=path)
    f = load_coin_field_csv(path)
    # Steps read the coin at the pre-step time, so t_max supports
    # t_max + 1 steps and no more.
    evolve(InitialState(eta=0.3), f, 6)
    with pytest.raises(TotalityError, match="t=6"):
        evolve(InitialState(eta=0.3), f, 7)


def test_beta_drift_leaves_pmf_unchanged():
    """A linearly drifting beta only re-phases the components."""
    base = CoinAngles(theta=np.pi / 3)
    drifting = CoinField.from_functions(
        theta_of=lambda n, t: np.pi / 3,
        alpha_of=lambda n, t: 0.0,
        beta_of=lambda n, t: 0.1 * t,
        chi_of=lambda n, t: 0.0,
    )
    init = InitialState(eta=np.pi / 3)
    ref = evolve(init, base, 30)
    alt = evolve(init, drifting, 30)
    assert np.max(np.abs(pmf(alt) - pmf(ref))) < 1e-12
    # The amplitudes themselves do differ.
    assert np.max(np.abs(alt.minus_amps - ref.minus_amps)) > 1e-3


def test_start_from_existing_state():
    c = CoinAngles(theta=0.5)
    full = evolve(InitialState(eta=0.7), c, 20)
    half = evolve(InitialState(eta=0.7), c, 11)
    resumed = evolve(half, c, 9)
    assert resumed.t == 20
    assert np.allclose(resumed.plus_amps, full.plus_amps, atol=1e-15)
    assert np.allclose(resumed.minus_amps, full.minus_amps, atol=1e-15)
