import pytest

from asmoduli.errors import InsufficientPrecision, NoSuchRoot
from asmoduli.gf import field_create
from asmoduli.kummer import KummerCover, cover_add, cover_mul
from asmoduli.localexp import LocalFrame, _series_mul
from asmoduli.pfrac import PuncturedLine

F16 = field_create(2, 2, 4)
F9 = field_create(3, 1, 2)

COVERS = [
    KummerCover(PuncturedLine(F16, (0, 1)), 3, [1, 1]),
    KummerCover(PuncturedLine(F16, (0, 1)), 3, [1, 2]),
    KummerCover(PuncturedLine(F9, (0, 1)), 4, [2, 1]),
    KummerCover(PuncturedLine(F9, (0, 1)), 4, [1, 1], unit_const=1),
    KummerCover(PuncturedLine(F16, (0,)), 5, [2]),
]


def frames(V):
    for P in V.base.puncture_ids():
        for k in range(V.n):
            yield LocalFrame(V, P, k)


def series_pow(ctx, a, k, upto):
    out = {0: 1}
    for _ in range(k):
        out = _series_mul(ctx, out, a, upto)
    return out


@pytest.mark.parametrize("V", COVERS, ids=lambda V: f"n{V.n}-{V.exponents}")
def test_y_expansion_raised_to_n_is_f(V):
    N = 12
    for fr in frames(V):
        ys = fr.expand(V.y(), N + 40)
        lo = min(ys)
        lhs = series_pow(V.ctx, {k - lo: c for k, c in ys.items()}, V.n, N)
        rhs = fr.expand(V.lift(V.f), N + V.n * lo)
        assert lhs == {k - V.n * lo: c for k, c in rhs.items()}


@pytest.mark.parametrize("V", COVERS, ids=lambda V: f"n{V.n}-{V.exponents}")
def test_expansion_is_multiplicative(V):
    U = V.base
    a = cover_add(V.lift(U.inv_linear(0, 2), 1), V.lift(U.x(), 2))
    b = cover_add(V.y(), V.lift(U.inv_linear(U.r - 1), V.n - 1))
    N = 6
    for fr in frames(V):
        sa, sb = fr.expand(a, N + 60), fr.expand(b, N + 60)
        assert _series_mul(V.ctx, sa, sb, N) == fr.expand(cover_mul(a, b), N)


def test_branch_is_root_index_mod_g():
    V = COVERS[2]  # m = 2 at 0, g = 2
    U = V.base
    b = cover_add(V.y(), V.lift(U.x()))
    assert LocalFrame(V, 0, 0).branch == 0 and LocalFrame(V, 0, 3).branch == 1
    # root indices congruent mod g give the same point, reparametrized by s -> lam*s
    # with lam^e = 1 and lam^m' = zeta^g
    g, e, mp = V.g(0), V.e(0), V.mprime(0)
    lam = V.ctx.pow(V.zeta, g * pow(mp, -1, e))
    for k in range(g):
        a = LocalFrame(V, 0, k).expand(b, 12)
        c = LocalFrame(V, 0, k + g).expand(b, 12)
        assert c == {i: V.ctx.mul(V.ctx.pow(lam, i), v) for i, v in a.items()}
    for k in range(V.n):
        r0 = LocalFrame(V, 0, k).root()
        assert V.ctx.pow(r0, V.n) == LocalFrame(V, 0, k).u0()


def test_root_missing_raises():
    F3 = field_create(3, 1, 1)
    with pytest.raises(NoSuchRoot):
        KummerCover(PuncturedLine(F3, (0,)), 4, [1])
    V = KummerCover(PuncturedLine(F9, (0,)), 4, [1], unit_const=F9.primitive)
    with pytest.raises(NoSuchRoot):
        LocalFrame(V, 0).root()


def test_principal_part_precision():
    V = COVERS[0]
    b = V.lift(V.base.inv_linear(0, 3), 1)
    fr = LocalFrame(V, 0)
    need = fr.pole_bound(b)
    assert fr.principal_part(b, need) == fr.principal_part(b)
    with pytest.raises(InsufficientPrecision):
        fr.principal_part(b, need - 1)
