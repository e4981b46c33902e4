from fractions import Fraction

from threadskein.attachment import ThreadingSpace
from threadskein.cantor import build_thread
from threadskein.skein import SkeinConfig, build_skein
from threadskein.svg import emit_svg

F = Fraction


def pieces(text):
    return text.count('class="piece')


def test_gaps_become_breaks(T_A):
    assert pieces(emit_svg(T_A, None)) == 4


def test_gapless_is_one_arc(T_LINE):
    assert pieces(emit_svg(T_LINE, None)) == 1


def test_skein_bundle():
    tr = build_skein(SkeinConfig(depth=1, gammas=2, gaps_per_thread=0))
    text = emit_svg(tr, None)
    assert pieces(text) == 2
    assert text.count("<!-- A .. B #") == 2
    assert ">A</text>" in text and ">B</text>" in text


def test_threading_space():
    ts = ThreadingSpace(F(1, 2), ((1, build_thread("dyadic:1", 2, F(1, 2))),))
    text = emit_svg(ts, None)
    assert pieces(text) == 3 and ">A</text>" in text


def test_deterministic_and_written(tmp_path, T_A):
    path = tmp_path / "t.svg"
    text = emit_svg(T_A, path)
    assert path.read_text() == text == emit_svg(T_A, None)
    assert text.startswith("<svg") and text.endswith("</svg>\n")
