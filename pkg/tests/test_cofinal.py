import random

import pytest

from binmc.cofinal import (DEFAULT_INSTANCE, CofinalInstance, RelClass,
                           complement, delta_top_retract, diagonal_represent,
                           pair_complement, rel_class)
from binmc.errors import (CertificateError, MembershipRefusal, NotAcyclic,
                          ShapeError)
from binmc.fpmod import FpModule, FpMorphism
from binmc.gen import (conjugate_multicomplex, random_multicomplex,
                       random_tn_class)
from binmc.kgroups import FormalClass, class_torsion, torsion, verify_chain
from binmc.matrix import Matrix
from binmc.multicomplex import (BinaryMulticomplex, direct_sum_multi,
                                validate)
from binmc.rings import QQ, ZZ


def unit_complex(ring, u):
    R = FpModule.free(ring, 1)
    ident = FpMorphism.identity(R)
    return BinaryMulticomplex.from_binary_chain(ring, [R, R], [ident], [ident.scale(u)])


def test_instance_predicates():
    inst = DEFAULT_INSTANCE
    assert inst.module_in_ambient(FpModule.free(ZZ, 3))
    assert not inst.module_in_sub(FpModule.free(ZZ, 3))
    assert inst.module_in_sub(FpModule.free(ZZ, 4))
    torsion_mod = FpModule(ZZ, 1, Matrix.from_int_rows(ZZ, [[6]]))
    assert not inst.module_in_ambient(torsion_mod)
    assert not CofinalInstance(QQ).module_in_ambient(FpModule.free(ZZ, 2))
    # cofinality: the complement has rank at most one and evens the sum
    for r in range(5):
        comp = inst.module_complement(FpModule.free(ZZ, r))
        assert comp.gens <= 1 and (r + comp.gens) % 2 == 0
    # closure of the predicate under direct sums
    assert (4 + 2) % 2 == 0 and inst.module_in_sub(FpModule.free(ZZ, 6))


def test_rel_class_is_additive_and_exact():
    rng = random.Random(0)
    for _ in range(10):
        N1 = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2)
        N2 = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2)
        assert rel_class(direct_sum_multi([N1, N2])) == rel_class(N1) + rel_class(N2)
        doubled = direct_sum_multi([N1, N1])
        assert rel_class(doubled).is_zero()
        assert DEFAULT_INSTANCE.in_sub(doubled)
    U = unit_complex(ZZ, 1)
    assert rel_class(U) == RelClass(1, frozenset({(0,), (1,)}))
    assert not rel_class(U).is_zero()


def test_complement_unit_complexes():
    for u in (1, -1):
        U = unit_complex(ZZ, u)
        T = complement(U, 0)
        assert T.is_diagonal_in(0)
        assert all(m.gens == 1 for m in T.objects.values())
        assert DEFAULT_INSTANCE.in_sub(direct_sum_multi([U, T]))


def test_complement_of_even_input_is_zero():
    rng = random.Random(1)
    for dim in (1, 2):
        N = random_multicomplex(rng, ZZ, dim, length=2, max_rank=2)
        doubled = direct_sum_multi([N, N])
        T = complement(doubled, dim - 1)
        assert T.is_zero()


def test_complement_preserves_other_diagonal_directions():
    rng = random.Random(2)
    for _ in range(6):
        N = random_multicomplex(rng, ZZ, 2, length=3, max_rank=2, diagonal_axes=(1,))
        T = complement(N, 0)
        assert T.is_diagonal_in(0) and T.is_diagonal_in(1)
        assert DEFAULT_INSTANCE.in_sub(direct_sum_multi([N, T]))
    N = random_multicomplex(rng, ZZ, 3, length=2, max_rank=2,
                            diagonal_axes=(2,), bricks=1)
    T = complement(N, 0)
    assert T.is_diagonal_in(0) and T.is_diagonal_in(2)
    assert DEFAULT_INSTANCE.in_sub(direct_sum_multi([N, T]))


def test_complement_general_branch():
    rng = random.Random(3)
    for _ in range(6):
        N = random_multicomplex(rng, ZZ, 2, length=3, max_rank=2)
        for i in range(2):
            T = complement(N, i)
            assert T.is_diagonal_in(i)
            assert DEFAULT_INSTANCE.in_sub(direct_sum_multi([N, T]))
            assert validate(T, "free").ok


def test_complement_dimension_three():
    rng = random.Random(4)
    N = random_multicomplex(rng, ZZ, 3, length=2, max_rank=2, bricks=1)
    T = complement(N, 1)
    assert T.is_diagonal_in(1)
    assert DEFAULT_INSTANCE.in_sub(direct_sum_multi([N, T]))


def test_complement_rejections():
    T6 = FpModule(ZZ, 1, Matrix.from_int_rows(ZZ, [[6]]))
    ident = FpMorphism.identity(T6)
    torsion_complex = BinaryMulticomplex.from_binary_chain(ZZ, [T6, T6], [ident], [ident])
    with pytest.raises(MembershipRefusal):
        complement(torsion_complex, 0)
    R = FpModule.free(ZZ, 1)
    z = FpMorphism.zero(R, R)
    not_acyclic = BinaryMulticomplex.from_binary_chain(ZZ, [R, R], [z], [z])
    with pytest.raises(NotAcyclic):
        complement(not_acyclic, 0)
    U = unit_complex(ZZ, 1)
    with pytest.raises(ShapeError):
        complement(U, 3)
    with pytest.raises(ShapeError):
        complement(BinaryMulticomplex.of_module(R), 0)


def test_pair_complement_modules():
    N1 = BinaryMulticomplex.of_module(FpModule.free(ZZ, 1))
    N2 = BinaryMulticomplex.of_module(FpModule.free(ZZ, 3))
    P = pair_complement(N1, N2)
    assert (1 + P.objects[()].gens) % 2 == 0
    assert (3 + P.objects[()].gens) % 2 == 0
    N4 = BinaryMulticomplex.of_module(FpModule.free(ZZ, 4))
    with pytest.raises(MembershipRefusal):
        pair_complement(N1, N4)


def test_pair_complement_multicomplexes():
    rng = random.Random(5)
    for _ in range(5):
        N1 = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2)
        N2, _, _ = conjugate_multicomplex(rng, N1)  # same rank grid
        P = pair_complement(N1, N2)
        assert DEFAULT_INSTANCE.in_sub(direct_sum_multi([N1, P]))
        assert DEFAULT_INSTANCE.in_sub(direct_sum_multi([N2, P]))
    odd = unit_complex(ZZ, 1)
    even = direct_sum_multi([odd, odd])
    with pytest.raises(MembershipRefusal):
        pair_complement(odd, even)


def test_delta_top_retract():
    rng = random.Random(6)
    for _ in range(5):
        M = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2)
        out = delta_top_retract(M, 0)
        assert out.is_diagonal_in(0)
        assert validate(out).ok
        assert delta_top_retract(out, 0) == out
    D = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2, diagonal_axes=(1,))
    assert delta_top_retract(D, 1) == D


def test_diagonal_represent_two_directions():
    rng = random.Random(7)
    g1 = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2, diagonal_axes=(0,))
    g2 = random_multicomplex(rng, ZZ, 2, length=2, max_rank=2, diagonal_axes=(1,))
    x = FormalClass.of(g1) - FormalClass.of(g2)
    witnesses = [0 if M.equivalent(g1) else 1 for M, _ in x.entries()]
    t, chain = diagonal_represent(x, witnesses, i=0)
    assert t.is_diagonal_in(0)
    report = verify_chain(chain)
    assert report.ok, report.reason
    assert chain.end == FormalClass.of(t)


def test_diagonal_represent_edge_cases():
    rng = random.Random(8)
    g = random_multicomplex(rng, ZZ, 1, length=3, max_rank=2, diagonal_axes=(0,))
    t, chain = diagonal_represent(FormalClass.of(g), [0])
    assert len(chain.steps) == 0 and t.equivalent(g)

    t, chain = diagonal_represent(FormalClass.zero(2), [], i=1)
    assert t.is_zero() and verify_chain(chain).ok

    t, chain = diagonal_represent(-FormalClass.of(g), [0])
    assert t.is_diagonal_in(0) and verify_chain(chain).ok

    U = unit_complex(ZZ, -1)  # not diagonal anywhere
    with pytest.raises(CertificateError):
        diagonal_represent(FormalClass.of(U), [0])


def test_diagonal_represent_random_classes():
    rng = random.Random(9)
    for dim in (1, 2, 3):
        for _ in range(3):
            x, witnesses = random_tn_class(rng, ZZ, dim, terms=rng.randint(1, 3),
                                           length=2, max_rank=2)
            t, chain = diagonal_represent(x, witnesses)
            i = witnesses[0] if witnesses else 0
            assert t.is_diagonal_in(i)
            report = verify_chain(chain)
            assert report.ok, report.reason


def test_diagonal_represent_torsion_consistency():
    # chains use only split sequences and diagonal steps, so the summandwise
    # torsion of the input class must survive into the representative
    rng = random.Random(10)
    for _ in range(5):
        x, witnesses = random_tn_class(rng, ZZ, 1, terms=rng.randint(1, 3),
                                       length=3, max_rank=2)
        t, chain = diagonal_represent(x, witnesses)
        assert verify_chain(chain).ok
        assert torsion(t) == class_torsion(x, ring=ZZ)
