import numpy as np
import pytest

from fermi_lab.fock import ModeSpace
from fermi_lab.wick import (
    OperatorWord,
    WordFactor,
    WordSyntaxError,
    dense_normal_form,
    dense_word,
    normal_order_two_block,
    normal_order_word,
    parse_word,
    vacuum_expectation,
)

RNG = np.random.default_rng(42)


def rv(m):
    return RNG.normal(size=m) + 1j * RNG.normal(size=m)


def random_word(space, n, rng=RNG):
    factors = []
    for _ in range(n):
        alpha = int(rng.integers(0, 2))
        beta = int(rng.integers(0, 2))
        if alpha == 0 and beta == 0:
            alpha = 1
        factors.append(
            WordFactor(
                rv(space.modes) if alpha else None,
                rv(space.modes) if beta else None,
                alpha,
                beta,
            )
        )
    return OperatorWord(space, tuple(factors))


def test_single_factor_is_its_own_normal_form():
    space = ModeSpace(3)
    word = OperatorWord(space, (WordFactor(rv(3), rv(3), 1, 1),))
    nf = normal_order_word(word)
    assert len(nf.terms) == 1
    term = nf.terms[0]
    assert term.coefficient == 1.0
    assert term.creator_indices == (1,)
    assert term.annihilator_indices == (1,)


def test_two_factor_swap_by_hand():
    """A-(g2) A+(f1) = -A+(f1) A-(g2) + <g2|f1>."""
    space = ModeSpace(3)
    f1, g2 = rv(3), rv(3)
    word = OperatorWord(space, (WordFactor(f1, None, 1, 0), WordFactor(None, g2, 0, 1)))
    nf = normal_order_word(word)
    by_key = {(t.creator_indices, t.annihilator_indices): t.coefficient for t in nf.terms}
    assert by_key[((), ())] == pytest.approx(np.vdot(g2, f1))
    assert by_key[((1,), (2,))] == pytest.approx(-1.0)
    assert len(nf.terms) == 2


def test_normal_order_matches_dense_product():
    """Master property: the normal form IS the word, entrywise."""
    space = ModeSpace(5)
    for n in (2, 3, 4):
        for _ in range(8):
            word = random_word(space, n)
            gap = dense_normal_form(normal_order_word(word)) - dense_word(word)
            assert np.max(np.abs(gap)) <= 1e-10


def test_term_count_bounded_by_bell():
    space = ModeSpace(5)
    word = random_word(space, 4)
    assert len(normal_order_word(word).terms) <= 15


def test_word_length_guard():
    space = ModeSpace(2)
    factors = tuple(WordFactor(rv(2), None, 1, 0) for _ in range(8))
    with pytest.raises(ValueError):
        normal_order_word(OperatorWord(space, factors))


def test_two_block_single_pair_reproduces_car():
    space = ModeSpace(4)
    f, g = rv(4), rv(4)
    nf = normal_order_two_block(space, [(g, 1)], [(f, 1)])
    by_key = {(t.creator_indices, t.annihilator_indices): t.coefficient for t in nf.terms}
    assert by_key[((), ())] == pytest.approx(np.vdot(g, f))
    assert by_key[((1,), (2,))] == pytest.approx(-1.0)


def test_two_block_empty_annihilator_block():
    space = ModeSpace(4)
    fs = [(rv(4), 1), (rv(4), 1)]
    nf = normal_order_two_block(space, [], fs)
    assert len(nf.terms) == 1
    assert nf.terms[0].coefficient == 1.0
    assert nf.terms[0].creator_indices == (2, 1)
    assert nf.terms[0].annihilator_indices == ()


def test_two_block_matches_dense():
    space = ModeSpace(5)
    for n_ann, n_cre in [(1, 2), (2, 2), (3, 3), (2, 3)]:
        for _ in range(5):
            gs = [(rv(5), int(RNG.integers(0, 2))) for _ in range(n_ann)]
            fs = [(rv(5), int(RNG.integers(0, 2))) for _ in range(n_cre)]
            # ensure at least one live line on each side
            gs[0] = (gs[0][0], 1)
            fs[0] = (fs[0][0], 1)
            nf = normal_order_two_block(space, gs, fs)
            gap = dense_normal_form(nf) - dense_word(nf.word)
            assert np.max(np.abs(gap)) <= 1e-10


def test_two_block_agrees_with_padded_word():
    space = ModeSpace(4)
    for n_ann, n_cre in [(1, 1), (2, 2), (2, 3)]:
        gs = [(rv(4), 1) for _ in range(n_ann)]
        fs = [(rv(4), 1) for _ in range(n_cre)]
        via_matchings = normal_order_two_block(space, gs, fs)
        via_partitions = normal_order_word(via_matchings.word)
        gap = dense_normal_form(via_matchings) - dense_normal_form(via_partitions)
        assert np.max(np.abs(gap)) <= 1e-10


def test_vacuum_expectation_basics():
    space = ModeSpace(4)
    f, g = rv(4), rv(4)
    # <vac| A-(g) A+(f) |vac> = <g|f>
    word = OperatorWord(space, (WordFactor(f, None, 1, 0), WordFactor(None, g, 0, 1)))
    assert vacuum_expectation(word) == pytest.approx(np.vdot(g, f))
    # odd words vanish
    odd = OperatorWord(space, (WordFactor(f, None, 1, 0),))
    assert vacuum_expectation(odd) == 0.0


def test_vacuum_expectation_matches_dense():
    space = ModeSpace(5)
    vac = space.vacuum()
    for _ in range(10):
        word = random_word(space, 4)
        direct = np.vdot(vac, dense_word(word) @ vac)
        assert vacuum_expectation(word) == pytest.approx(direct, abs=1e-12)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def vector_table():
    return {"f1": np.array([1.0, 0, 0]), "g2": np.array([0, 1.0, 0])}


def test_parse_word_two_tokens():
    space = ModeSpace(3)
    word = parse_word("a-(g2) a+(f1)", vector_table(), space)
    assert word.n == 2
    assert word.alpha == (1, 0)
    assert word.beta == (0, 1)


def test_parse_word_merges_creator_annihilator_pairs():
    space = ModeSpace(3)
    word = parse_word("a+(f1) a-(g2)", vector_table(), space)
    assert word.n == 1
    assert word.alpha == (1,) and word.beta == (1,)


def test_parse_word_matches_dense_composition():
    space = ModeSpace(3)
    table = vector_table()
    word = parse_word("a-(g2) a+(f1) a+(g2)", table, space)
    from fermi_lab.fock import annihilation, creation

    expected = (
        annihilation(space, table["g2"])
        @ creation(space, table["f1"])
        @ creation(space, table["g2"])
    ).toarray()
    assert np.max(np.abs(dense_word(word) - expected)) <= 1e-12


def test_parser_reports_byte_offsets():
    space = ModeSpace(3)
    with pytest.raises(WordSyntaxError) as err:
        parse_word("a-(g2) b+(f1)", vector_table(), space)
    assert err.value.offset == 7
    with pytest.raises(WordSyntaxError) as err:
        parse_word("a-(nope)", vector_table(), space)
    assert err.value.offset == 0
    with pytest.raises(WordSyntaxError):
        parse_word("   ", vector_table(), space)
