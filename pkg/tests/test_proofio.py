import pathlib

import pytest

from pllk import corpus, proofio
from pllk.sexpr import SexprError

CORPUS_DIR = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def test_parse_print_identity_on_corpus():
    for name in corpus.CORPUS:
        d = corpus.build(name)
        assert proofio.parse_proof(proofio.print_proof(d)) == d


def test_corpus_files_match_builders():
    for name in corpus.CORPUS:
        path = CORPUS_DIR / f"{name}.pll"
        text = path.read_text()
        assert text == proofio.print_proof(corpus.build(name)) + "\n"
        assert proofio.parse_proof(text) == corpus.build(name)


def test_print_is_byte_stable():
    for name in corpus.CORPUS:
        text = proofio.print_proof(corpus.build(name))
        again = proofio.print_proof(proofio.parse_proof(text))
        assert again == text


def test_parse_errors():
    with pytest.raises(SexprError):
        proofio.parse_proof("(ax")
    with pytest.raises(SexprError):
        proofio.parse_proof("(frobnicate (X))")
    with pytest.raises(SexprError):
        proofio.parse_proof("(ref nowhere)")
    with pytest.raises(SexprError):
        proofio.parse_proof("(qw (X) 0 (one))")  # principal not a ?-formula


def test_parse_rejects_schema_mismatch():
    # premise does not extend the conclusion correctly
    with pytest.raises(SexprError):
        proofio.parse_proof("(qb ((? X)) 0 (ax X))")


def test_comments_and_whitespace():
    text = "; the zero proof\n" + proofio.print_proof(corpus.zero()) + "\n; end\n"
    assert proofio.parse_proof(text) == corpus.zero()
