"""End-to-end acceptance checks of the packaged guarantees.

Each test exercises one advertised guarantee at its stated tolerance and
prints exactly one pass/fail line. Instance counts and tolerances are pinned;
loosening either is a contract change, not a fix.
"""

import math
import subprocess
import sys
import time

import numpy as np

from cohkit import channels, coherence, dilation, instruments, linalg, states


def report(index, name, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"acceptance {index:>2}/12 {status}  {name}  [{detail}]")
    assert ok, f"{name}: {detail}"


def test_01_diagonal_channels_act_entrywise():
    start = time.perf_counter()
    seeds = np.random.SeedSequence(101).spawn(100)
    worst = 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        d = 2 + t % 7
        ch = channels.random_gio(d, 1 + t % d, seed=rng)
        corr = channels.correlation_matrix_of(ch).matrix
        for _ in range(5):
            rho = states.random_density(d, seed=rng).matrix
            diff = channels.apply_channel(ch, rho).matrix - corr.T * rho
            worst = max(worst, linalg.hs_norm(diff))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed <= 5.0
    report(1, "diagonal channels act as entrywise products", ok,
           f"worst residual {worst:.3e} tol 1e-10, {elapsed:.2f}s of 5s budget")


def test_02_unital_channels_spread_spectra():
    seeds = np.random.SeedSequence(102).spawn(100)
    order_ok = True
    worst_gain = 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        d = 2 + t % 7
        if t % 2 == 0:
            ch = channels.random_gio(d, min(d, 2 + t % 4), seed=rng)
        else:
            ch = channels.random_mixed_unitary(d, 2 + t % 3, seed=rng)
        rho = states.random_density(d, seed=rng)
        out = channels.apply_channel(ch, rho)
        order_ok &= linalg.majorizes(rho.eigenvalues(), out.eigenvalues(), tol=1e-9)
        gain = linalg.von_neumann_entropy(out.matrix) - linalg.von_neumann_entropy(rho.matrix)
        worst_gain = min(worst_gain, gain)
    ok = order_ok and worst_gain >= -1e-9
    report(2, "unital channels never sharpen spectra", ok,
           f"all ordered: {order_ok}, lowest entropy gain {worst_gain:.3e} tol -1e-9")


def test_03_pinching_is_the_minimal_disturbance():
    seeds = np.random.SeedSequence(103).spawn(20)
    worst_margin = -np.inf
    worst_pyth = 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        profile = ((2, 1), (2, 2), (3, 1), (2, 2, 1), (3, 2))[t % 5]
        d = sum(profile)
        obs = states.random_observable(d, profile, seed=rng)
        rho = states.random_density(d, seed=rng).matrix
        pinched = instruments.luders(rho, obs).matrix
        base = linalg.hs_norm(rho - pinched)
        to_pinched = linalg.relative_entropy(rho, pinched)
        for _ in range(200):
            sigma = instruments.random_block_diagonal(obs, seed=rng).matrix
            worst_margin = max(worst_margin, base - linalg.hs_norm(rho - sigma))
            lhs = linalg.relative_entropy(rho, sigma)
            rhs = to_pinched + linalg.relative_entropy(pinched, sigma)
            worst_pyth = max(worst_pyth, abs(lhs - rhs))
    ok = worst_margin <= 1e-12 and worst_pyth <= 1e-8
    report(3, "block pinching is closest among block-diagonal states", ok,
           f"worst distance margin {worst_margin:.3e} tol 1e-12, "
           f"three-point identity residual {worst_pyth:.3e} tol 1e-8")


def test_04_fine_measures_dominate_and_gap_is_entropic():
    seeds = np.random.SeedSequence(104).spawn(50)
    worst_hier, worst_gap, worst_opt = 0.0, 0.0, 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        profile = ((2, 1), (2, 2), (3, 1), (2, 2, 1), (3, 2), (4, 2))[t % 6]
        d = sum(profile)
        obs = states.random_observable(d, profile, seed=rng)
        rho = states.random_density(d, seed=rng).matrix
        blocks = [obs.block_basis(n) @ states.random_unitary(p, rng)
                  for n, p in enumerate(profile)]
        fg = states.fine_graining(obs, blocks)
        fine_l1 = coherence.c_l1(rho, fg.basis)
        coarse_l1 = coherence.c_l1_coarse(rho, obs, fg)
        fine_re = coherence.c_re(rho, fg.basis)
        coarse_re = coherence.c_re_coarse(rho, obs)
        worst_hier = max(worst_hier, coarse_l1 - fine_l1, coarse_re - fine_re)
        gap = coherence.hierarchy_gap(rho, obs, fg)
        worst_gap = max(worst_gap, abs((fine_re - coarse_re) - gap))
        best = instruments.optimal_fine_grain(obs, rho)
        worst_opt = max(worst_opt, coherence.hierarchy_gap(rho, obs, best))
    ok = worst_hier <= 1e-10 and worst_gap <= 1e-8 and worst_opt <= 1e-8
    report(4, "fine measures dominate coarse ones with an entropic gap", ok,
           f"worst hierarchy violation {worst_hier:.3e} tol 1e-10, "
           f"gap identity {worst_gap:.3e} and optimal gap {worst_opt:.3e} tol 1e-8")


def _conditional_information_sum(st, obs):
    rho = st.state.matrix
    eye_a = np.eye(st.dim_a)
    total = 0.0
    for p in obs.projectors:
        lifted = np.kron(eye_a, p)
        cond = lifted @ rho @ lifted
        p_n = float(np.real(np.trace(cond)))
        if p_n < 1e-12:
            continue
        cond = (cond + cond.conj().T) / 2.0 / p_n
        total += p_n * coherence.mutual_information(
            states.BipartiteState(dims=st.dims, state=states.DensityMatrix(matrix=cond))
        )
    return total


def _entangled_witness_instance():
    # a maximally entangled pair hidden inside the two-dimensional eigenspace,
    # mixed with a little white noise to stay full rank
    psi = np.zeros(6, dtype=complex)
    psi[0] = psi[4] = 1.0 / math.sqrt(2.0)
    rho = 0.98 * np.outer(psi, psi.conj()) + 0.02 * np.eye(6) / 6.0
    st = states.bipartite(rho, 2, 3)
    obs = states.observable_from_projectors(
        [2.0, 1.0], [np.diag([1.0, 1.0, 0.0]), np.diag([0.0, 0.0, 1.0])]
    )
    return st, obs


def test_05_discord_splits_into_coherence_terms():
    seeds = np.random.SeedSequence(105).spawn(50)
    worst_split, worst_total, witness_best = 0.0, 0.0, 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        if t == 1:
            st, obs = _entangled_witness_instance()
        else:
            dim_b = 2 if t % 2 == 0 else 3
            if t % 4 < 2:
                profile = (1,) * dim_b
            else:
                profile = (dim_b - 1, 1) if dim_b > 2 else (2,)
            st = states.random_bipartite(2, dim_b, seed=rng)
            obs = states.random_observable(dim_b, profile, seed=rng)
        delta = coherence.luders_discord(st, obs)
        split = coherence.qi_coherence(st, obs) - coherence.c_re_coarse(
            st.reduced_b().matrix, obs
        )
        worst_split = max(worst_split, abs(delta - split))
        j = coherence.classical_correlation(st, obs)
        worst_total = max(worst_total, abs(j + delta - coherence.mutual_information(st)))
        if max(obs.degeneracies) > 1:
            witness_best = max(witness_best, _conditional_information_sum(st, obs))
    ok = worst_split <= 1e-8 and worst_total <= 1e-8 and witness_best > 1e-3
    report(5, "discord equals joint minus local coherence", ok,
           f"split residual {worst_split:.3e} and total residual {worst_total:.3e} "
           f"tol 1e-8, conditional information witness {witness_best:.3e} > 1e-3")


def test_06_fixed_points_form_the_commutant():
    seeds = np.random.SeedSequence(106).spawn(30)
    dims_ok = True
    worst_fixed, worst_collapsed, worst_expansion = 0.0, 0.0, 0.0
    n_free = 0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        d = 2 + t % 5
        ch = channels.random_gio(d, 1 + t % d, seed=rng)
        basis = channels.commutant(ch)
        sup = channels.channel_superoperator(ch)
        sv = np.linalg.svd(sup - np.eye(d * d), compute_uv=False)
        dims_ok &= len(basis) == int(np.sum(sv <= 1e-9))
        for _ in range(2):
            coeff = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
            x = sum(c * m for c, m in zip(coeff, basis))
            res = channels.fixed_point_check(ch, x)
            worst_fixed = max(worst_fixed, res.fixedness_residual)
            lhs = np.zeros((d, d), dtype=complex)
            for k in ch.kraus:
                comm = x @ k - k @ x
                lhs += comm @ comm.conj().T
            rhs = channels.apply_to_operator(ch, x @ x.conj().T) - x @ x.conj().T
            worst_collapsed = max(worst_collapsed, linalg.hs_norm(lhs - rhs))
        for _ in range(4):
            x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            worst_expansion = max(
                worst_expansion, channels.fixed_point_check(ch, x).identity_residual
            )
            n_free += 1
    ok = (dims_ok and worst_fixed <= 1e-10 and worst_collapsed <= 1e-10
          and worst_expansion <= 1e-10 and n_free >= 100)
    report(6, "fixed points of unital diagonal channels form the commutant", ok,
           f"dimensions match: {dims_ok}, fixedness {worst_fixed:.3e}, "
           f"commutator identity {worst_collapsed:.3e} on fixed points and "
           f"{worst_expansion:.3e} on {n_free} free operators, tol 1e-10")


def test_07_repeated_application_dephases_geometrically():
    seeds = np.random.SeedSequence(107).spawn(10)
    bound = 0.9**200 + 1e-12
    worst_off, worst_law = 0.0, 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        d = 2 + t % 5
        corr = channels.correlation_matrix_of(channels.random_gio(d, d, seed=rng)).matrix
        off = float(np.max(np.abs(corr - np.diag(np.diag(corr)))))
        if off > 0.9:
            shrink = 0.9 / off
            corr = shrink * corr + (1.0 - shrink) * np.eye(d)
        ch = channels.gio_from_correlation(corr)
        realized = channels.correlation_matrix_of(ch).matrix
        rho = states.random_density(d, seed=rng).matrix
        x = rho.copy()
        power = np.ones_like(realized)
        for _ in range(200):
            x = channels.apply_to_operator(ch, x)
            power = power * realized.T
            worst_law = max(worst_law, float(np.max(np.abs(x - power * rho))))
        worst_off = max(worst_off, float(np.max(np.abs(x - np.diag(np.diag(x))))))
    ok = worst_off <= bound and worst_law <= 1e-9
    report(7, "weak correlations dephase geometrically", ok,
           f"final off-diagonal {worst_off:.3e} tol {bound:.1e}, "
           f"entrywise power law residual {worst_law:.3e} tol 1e-9")


def _action_residual(ch_a, ch_b):
    worst = 0.0
    d = ch_a.dim
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            diff = channels.apply_to_operator(ch_a, unit) - channels.apply_to_operator(ch_b, unit)
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def test_08_every_dilation_round_trips():
    rng = np.random.default_rng(108)
    cases = []
    b = states.random_unitary(3, rng)
    cases.append((dilation.dilate_von_neumann(b),
                  channels.kraus_channel([np.outer(b[:, n], b[:, n].conj()) for n in range(3)])))
    obs = states.random_observable(4, (2, 1, 1), seed=rng)
    cases.append((dilation.dilate_luders(obs), channels.kraus_channel(list(obs.projectors))))
    for d, r in ((2, 2), (4, 3), (5, 2)):
        ch = channels.random_gio(d, r, seed=rng)
        cases.append((dilation.dilate_gio(ch), ch))
    identity = channels.kraus_channel([np.eye(3, dtype=complex)])
    cases.append((dilation.dilate_gio(identity), identity))
    for maker in (lambda: channels.random_sio(3, 2, seed=rng),
                  lambda: channels.random_sio(4, 3, seed=rng),
                  lambda: channels.random_io(3, seed=rng),
                  lambda: channels.random_io(4, seed=rng)):
        ch = maker()
        cases.append((dilation.dilate(ch), ch))
    dephasing = channels.kraus_channel(
        [np.diag([1.0 if i == n else 0.0 for i in range(3)]).astype(complex) for n in range(3)]
    )
    cnot = dilation.DilationModel(
        system_dim=3,
        ancilla_dim=3,
        apparatus_init=np.array([1.0, 0.0, 0.0], dtype=complex),
        joint_unitary=dilation.generalized_cnot(3),
        readout_basis=np.eye(3, dtype=complex),
    )
    cases.append((cnot, dephasing))
    worst_action, worst_unitary = 0.0, 0.0
    for model, reference in cases:
        u = model.joint_unitary
        worst_unitary = max(
            worst_unitary, float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
        )
        worst_action = max(worst_action, _action_residual(dilation.extract_kraus(model), reference))
    ok = worst_action <= 1e-10 and worst_unitary <= 1e-8
    report(8, "every dilation builder round trips its channel", ok,
           f"{len(cases)} models, worst action residual {worst_action:.3e} tol 1e-10, "
           f"worst unitarity defect {worst_unitary:.3e} tol 1e-8")


def test_09_instrument_outputs_match_pinching_coherence():
    seeds = np.random.SeedSequence(109).spawn(30)
    worst = 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        profile = ((2, 1), (2, 2), (3, 1), (2, 2, 1))[t % 4]
        d = sum(profile)
        obs = states.random_observable(d, profile, seed=rng)
        psi = states.random_pure(d, seed=rng)
        rho = np.outer(psi, psi.conj())
        fg = states.fine_graining(obs)
        theta = [obs.block_basis(n) @ states.random_unitary(p, rng)
                 for n, p in enumerate(profile)]
        inst = instruments.repeatable_instrument(obs, theta)
        pinched = instruments.luders(rho, obs).matrix
        moved = sum(k @ rho @ k.conj().T for k in inst.kraus)
        theta_basis = np.hstack(theta)
        worst = max(
            worst,
            abs(coherence.c_l1(pinched, fg.basis) - coherence.c_l1(moved, theta_basis)),
            abs(coherence.c_re(pinched, fg.basis) - coherence.c_re(moved, theta_basis)),
            abs(linalg.von_neumann_entropy(pinched) - linalg.von_neumann_entropy(moved)),
        )
    ok = worst <= 1e-10
    report(9, "repeatable instruments keep the pinching's coherence figures", ok,
           f"worst figure difference {worst:.3e} tol 1e-10")


def test_10_hand_built_channels_classify_exactly():
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    table = [
        (channels.phase_damping(0.75), channels.GIO),
        (channels.kraus_channel([np.sqrt(0.7) * np.eye(2), np.sqrt(0.3) * x]),
         channels.SIO_NOT_GIO),
        (channels.kraus_channel([
            np.array([[1.0, 0.0], [0.0, 0.8]], dtype=complex),
            np.array([[0.0, 0.6], [0.0, 0.0]], dtype=complex),
        ]), channels.IO_NOT_SIO),
    ]
    labels_ok = all(channels.classify(ch) == want for ch, want in table)
    rebuilt_ok = True
    for ch, _ in table:
        for k in ch.kraus:
            index_map, diag = channels.factor_kraus(k)
            rebuilt = np.zeros_like(k)
            for i, f_i in enumerate(index_map.mapping):
                rebuilt[f_i, i] = diag[i, i]
            rebuilt_ok &= np.array_equal(rebuilt, k)
    complete_ok = all(channels.io_completeness_check(ch) for ch, _ in table)
    ok = labels_ok and rebuilt_ok and complete_ok
    report(10, "hand-built channels classify exactly as listed", ok,
           f"labels: {labels_ok}, exact refactorizations: {rebuilt_ok}, "
           f"completeness: {complete_ok}")


def test_11_measurement_coherences_stay_nonnegative():
    seeds = np.random.SeedSequence(111).spawn(50)
    worst_neg, worst_proj = 0.0, 0.0
    for t, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        d = 2 if t % 2 == 0 else 3
        povm = states.random_povm(d, 2 + t % 3, seed=rng)
        rho = states.random_density(d, seed=rng).matrix
        worst_neg = min(worst_neg, coherence.povm_coherence(rho, povm),
                        coherence.povm_coherence_modified(rho, povm))
        u = states.random_unitary(d, rng)
        proj = states.make_povm([np.outer(u[:, i], u[:, i].conj()) for i in range(d)])
        expect = coherence.c_re(rho, u)
        worst_proj = max(
            worst_proj,
            abs(coherence.povm_coherence(rho, proj) - expect),
            abs(coherence.povm_coherence_modified(rho, proj) - expect),
        )
    ok = worst_neg >= -1e-10 and worst_proj <= 1e-10
    report(11, "generalized measurement coherences stay nonnegative", ok,
           f"lowest value {worst_neg:.3e} tol -1e-10, "
           f"projective reduction residual {worst_proj:.3e} tol 1e-10")


def test_12_property_suite_is_reproducible():
    cmd = [sys.executable, "-m", "cohkit.cli", "verify", "--seed", "0"]
    start = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True)
    elapsed = time.perf_counter() - start
    second = subprocess.run(cmd, capture_output=True)
    corrupt = subprocess.run(cmd + ["--corrupt"], capture_output=True)
    identical = first.stdout == second.stdout
    ok = (first.returncode == 0 and second.returncode == 0 and identical
          and elapsed <= 60.0 and corrupt.returncode == 1)
    report(12, "seeded property suite reruns byte-identically", ok,
           f"exit {first.returncode}, identical reruns: {identical}, "
           f"{elapsed:.1f}s of 60s budget, corrupted control exits {corrupt.returncode}")
