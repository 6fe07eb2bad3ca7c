import itertools

import numpy as np
import pytest

from conftest import dense_annihilator
from qpchem.secondq import (
    GeneratorCoefficients,
    LadderTerm,
    Statistics,
    build_generator,
    encode,
    generator_groups,
    hamiltonian_pauli,
    jordan_wigner,
    number_operator,
    qubit_particle_encode,
)
from qpchem.tensorspace import PauliString, PauliSum, expectation, new_basis_state

F, Q = Statistics.FERMIONIC, Statistics.QUBIT


def ladder(r, p, dagger, stats):
    return encode(LadderTerm(r, ((p, dagger),), stats))


def dense_term(term):
    mat = term.coefficient * np.eye(1 << term.num_orbitals, dtype=complex)
    for p, dagger in term.factors:
        a = dense_annihilator(term.num_orbitals, p, term.statistics is F)
        mat = mat @ (a.conj().T if dagger else a)
    return mat


def random_generator(rng, r):
    a = rng.normal(size=(r,) * 4) + 1j * rng.normal(size=(r,) * 4)
    a = a - a.transpose(1, 0, 2, 3)
    a = a - a.transpose(0, 1, 3, 2)
    return a - a.transpose(2, 3, 0, 1).conj()


def test_jw_creator_examples():
    a0 = jordan_wigner(LadderTerm.excitation(1, [0], []))
    assert a0.equals(PauliSum(1, [PauliString.from_letters("X", 0.5), PauliString.from_letters("Y", -0.5j)]))
    a2 = jordan_wigner(LadderTerm.excitation(4, [2], []))
    assert a2.equals(PauliSum(4, [PauliString.from_letters("ZZXI", 0.5), PauliString.from_letters("ZZYI", -0.5j)]))


def test_qubit_creator_has_no_string():
    s2 = qubit_particle_encode(LadderTerm.excitation(4, [2], [], Q))
    assert s2.equals(PauliSum(4, [PauliString.from_letters("IIXI", 0.5), PauliString.from_letters("IIYI", -0.5j)]))


@pytest.mark.parametrize("stats", [F, Q])
def test_number_operator_image(stats):
    n0 = encode(LadderTerm.excitation(1, [0], [0], stats))
    assert n0.equals(PauliSum(1, [PauliString.from_letters("I", 0.5), PauliString.from_letters("Z", -0.5)]))


def test_number_operator_identical_across_encodings():
    for r in range(1, 6):
        for p in range(r):
            fj = jordan_wigner(LadderTerm.excitation(r, [p], [p]))
            qp = qubit_particle_encode(LadderTerm.excitation(r, [p], [p], Q))
            assert dict(fj.items()) == dict(qp.items())
        assert number_operator(r).equals(
            sum((encode(LadderTerm.excitation(r, [p], [p], Q)) for p in range(r)), PauliSum(r)))


def test_qubit_hopping_example():
    r = 4
    op = qubit_particle_encode(LadderTerm.excitation(r, [3], [1], Q)) - \
        qubit_particle_encode(LadderTerm.excitation(r, [1], [3], Q))
    expected = PauliSum(r, [PauliString.from_letters("IYIX", 0.5j), PauliString.from_letters("IXIY", -0.5j)])
    assert op.equals(expected)
    assert all(t.weight == 2 for t in op.terms)


def test_encoders_reject_wrong_statistics():
    with pytest.raises(ValueError):
        jordan_wigner(LadderTerm.excitation(2, [0], [], Q))
    with pytest.raises(ValueError):
        qubit_particle_encode(LadderTerm.excitation(2, [0], [], F))
    with pytest.raises(ValueError):
        LadderTerm.excitation(2, [2], [])
    with pytest.raises(ValueError):
        Statistics.parse("bosonic")
    assert Statistics.parse("qubit-particle") is Q


@pytest.mark.parametrize("stats", [F, Q])
def test_images_match_dense_ladder_products(stats, rng):
    r = 4
    for _ in range(30):
        k = rng.integers(1, 5)
        factors = tuple((int(rng.integers(r)), bool(rng.integers(2))) for _ in range(k))
        term = LadderTerm(r, factors, stats, complex(rng.normal(), rng.normal()))
        np.testing.assert_allclose(encode(term).to_dense(), dense_term(term), atol=1e-13)


@pytest.mark.parametrize("stats", [F, Q])
def test_normal_ordering_preserves_operator(stats, rng):
    r = 4
    for _ in range(30):
        factors = tuple((int(rng.integers(r)), bool(rng.integers(2))) for _ in range(4))
        term = LadderTerm(r, factors, stats)
        ordered = term.normal_ordered()
        assert all(t.is_normal_ordered() for t in ordered)
        total = sum((dense_term(t) for t in ordered), np.zeros((1 << r,) * 2, dtype=complex))
        np.testing.assert_allclose(total, dense_term(term), atol=1e-13)


def test_normal_ordering_signs():
    (t,) = LadderTerm(3, ((0, False), (2, True)), F).normal_ordered()
    assert t.factors == ((2, True), (0, False)) and t.coefficient == -1
    (t,) = LadderTerm(3, ((0, False), (2, True)), Q).normal_ordered()
    assert t.coefficient == 1
    assert LadderTerm(3, ((1, True), (1, True)), F).normal_ordered() == []
    terms = LadderTerm(3, ((1, False), (1, True)), Q).normal_ordered()
    assert sorted((t.factors, t.coefficient) for t in terms) == [((), 1), (((1, True), (1, False)), -1)]


def _pauli_phases_ok(op):
    return all(t.coefficient in (1, -1, 1j, -1j) for t in op.terms)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_jw_anticommutation_exhaustive(r):
    ident = PauliSum.identity(r)
    zero = PauliSum(r)
    for p, q in itertools.product(range(r), repeat=2):
        a_p, ad_q = ladder(r, p, False, F), ladder(r, q, True, F)
        anti = (a_p * ad_q + ad_q * a_p).simplify()
        assert anti.equals(ident if p == q else zero, tol=0)
        assert _pauli_phases_ok(anti)
        a_q = ladder(r, q, False, F)
        assert (a_p * a_q + a_q * a_p).simplify().equals(zero, tol=0)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_qubit_particle_mixed_statistics_exhaustive(r):
    zero = PauliSum(r)
    for p, q in itertools.product(range(r), repeat=2):
        s_p, sd_q = ladder(r, p, False, Q), ladder(r, q, True, Q)
        if p == q:
            assert (s_p * sd_q + sd_q * s_p).simplify().equals(PauliSum.identity(r), tol=0)
        else:
            assert (s_p * sd_q - sd_q * s_p).simplify().equals(zero, tol=0)
            s_q = ladder(r, q, False, Q)
            assert (s_p * s_q - s_q * s_p).simplify().equals(zero, tol=0)


def test_generator_coefficient_validation(rng):
    good = random_generator(rng, 4)
    GeneratorCoefficients(good)
    bad = good.copy()
    bad[0, 1, 2, 3] += 1
    with pytest.raises(ValueError):
        GeneratorCoefficients(bad)
    with pytest.raises(ValueError):
        GeneratorCoefficients(np.zeros((2, 2, 2)))
    sym = np.abs(good) + np.abs(good).transpose(1, 0, 2, 3)
    with pytest.raises(ValueError):
        GeneratorCoefficients(sym)
    a = GeneratorCoefficients.from_pairs(4, {(0, 1, 2, 3): 0.5})
    assert a.tensor[1, 0, 2, 3] == -0.5 and a.tensor[2, 3, 0, 1] == -0.5


@pytest.mark.parametrize("stats", [F, Q])
def test_generator_anti_hermitian_and_dense(stats, rng):
    r = 4
    a = random_generator(rng, r)
    g = build_generator(GeneratorCoefficients(a), stats)
    assert g.is_anti_hermitian(tol=1e-12)
    ann = [dense_annihilator(r, p, stats is F) for p in range(r)]
    dense = np.zeros((1 << r,) * 2, dtype=complex)
    # folded form: qubit-particle pairs are symmetric, so the unrestricted sum would cancel
    for (p, q), (s, t) in itertools.product(itertools.combinations(range(r), 2), repeat=2):
        dense += 4 * a[p, q, s, t] * ann[p].conj().T @ ann[q].conj().T @ ann[t] @ ann[s]
    np.testing.assert_allclose(g.to_dense(), dense, atol=1e-11)
    if stats is F:
        full = sum(a[p, q, s, t] * ann[p].conj().T @ ann[q].conj().T @ ann[t] @ ann[s]
                   for p, q, s, t in itertools.product(range(r), repeat=4))
        np.testing.assert_allclose(g.to_dense(), full, atol=1e-11)


def test_zero_generator_is_empty():
    assert len(build_generator(np.zeros((4,) * 4), F)) == 0


@pytest.mark.parametrize("stats", [F, Q])
def test_double_excitation_images(stats):
    g = build_generator(GeneratorCoefficients.from_pairs(8, {(0, 1, 2, 3): 0.7}), stats)
    assert len(g) == 8
    assert all(t.weight == 4 for t in g.terms)
    assert all(t.letters[4:] == "IIII" for t in g.terms)


def test_generator_groups_commute_and_sum(rng):
    r = 6
    a = random_generator(rng, r)
    for stats in (F, Q):
        groups = generator_groups(a, stats)
        keys = [k for k, _ in groups]
        assert keys == sorted(keys)
        total = PauliSum(r)
        for _, grp in groups:
            terms = grp.terms
            assert all(x.commutes_with(y) for x in terms for y in terms)
            total = total + grp
        assert total.equals(build_generator(a, stats), tol=1e-12)


def test_max_weight_versus_span():
    r = 8
    for d in range(3, r):
        fermi, qubit = 0, 0
        for idx in itertools.combinations(range(r), 4):
            if idx[-1] - idx[0] != d:
                continue
            p, q, s, t = idx
            coeffs = GeneratorCoefficients.from_pairs(r, {(p, q, s, t): 1.0})
            fermi = max(fermi, max(x.weight for x in build_generator(coeffs, F).terms))
            qubit = max(qubit, max(x.weight for x in build_generator(coeffs, Q).terms))
        assert fermi == d + 1
        assert qubit == 4


def test_diagonal_hamiltonian():
    h = np.diag([0.3, -0.2, 1.1])
    ham = hamiltonian_pauli(h, np.zeros((3,) * 4))
    expected = PauliSum(3)
    for p, letters in enumerate(["ZII", "IZI", "IIZ"]):
        expected = expected + PauliSum(3, [PauliString.identity(3, 0.5 * h[p, p]),
                                           PauliString.from_letters(letters, -0.5 * h[p, p])])
    assert ham.equals(expected, tol=1e-15)


def test_hamiltonian_matches_dense_second_quantization(h2_problem):
    ints = h2_problem.spin
    r = ints.n_orb
    ann = [dense_annihilator(r, p) for p in range(r)]
    dense = np.zeros((1 << r,) * 2, dtype=complex)
    for p, s in itertools.product(range(r), repeat=2):
        dense += ints.h[p, s] * ann[p].conj().T @ ann[s]
    for p, q, s, t in itertools.product(range(r), repeat=4):
        dense += 0.5 * ints.g[p, q, s, t] * ann[p].conj().T @ ann[q].conj().T @ ann[t] @ ann[s]
    ham = hamiltonian_pauli(ints.h, ints.g, constant=ints.e_nuc)
    assert ham.is_hermitian()
    np.testing.assert_allclose(ham.to_dense(), dense + ints.e_nuc * np.eye(1 << r), atol=1e-12)


@pytest.mark.parametrize("name", ["h2_problem", "h4_problem"])
def test_reference_energy_is_rhf(name, request):
    prob = request.getfixturevalue(name)
    ham = hamiltonian_pauli(prob.spin.h, prob.spin.g, constant=prob.spin.e_nuc)
    e = expectation(new_basis_state(prob.spin.n_orb, range(prob.nelec)), ham)
    assert abs(e - prob.scf.energy) < 1e-10


def test_hamiltonian_rejects_asymmetric_integrals():
    h = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        hamiltonian_pauli(h, np.zeros((2,) * 4))
    g = np.zeros((2,) * 4)
    g[0, 1, 1, 1] = 1.0
    with pytest.raises(ValueError):
        hamiltonian_pauli(np.zeros((2, 2)), g)
