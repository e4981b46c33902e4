import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threadskein import serialize
from threadskein.attachment import ThreadingSpace
from threadskein.cantor import build_thread
from threadskein.gammastar import gamma_star_prefix, jump_infeasibility
from threadskein.lipmap import PLMap
from threadskein.skein import SkeinConfig, build_skein
from threadskein.thread import from_gaps
from threadskein.verify import standard_family

F = Fraction


def through_text(data):
    return json.loads(serialize.dumps(data))


def test_thread_layout(T_A):
    data = serialize.thread_to_json(T_A)
    assert data == {"length": "1/1", "width": "1/2", "gaps": [["1/3", "19/48"], ["1/2", "5/8"], ["2/3", "67/96"]]}


def test_dumps_is_stable(T_A):
    text = serialize.dumps(serialize.thread_to_json(T_A))
    assert text.endswith("\n") and text == serialize.dumps(serialize.thread_to_json(T_A))


@pytest.mark.parametrize(
    "make, dump, load",
    [
        (lambda: build_thread("half-bound", 5, F(1, 3)), serialize.thread_to_json, serialize.thread_from_json),
        (
            lambda: PLMap.from_function(build_thread("half-bound", 2, 1), build_thread("half-bound", 1, F(1, 2)),
                                        build_thread("half-bound", 2, 1).sample_points(F(1, 4)), lambda x: x),
            serialize.plmap_to_json,
            serialize.plmap_from_json,
        ),
        (
            lambda: ThreadingSpace(F(1, 2), ((1, build_thread("dyadic:1", 2, F(1, 2))), (2, build_thread("dyadic:2", 2, F(1, 2))))),
            serialize.threading_to_json,
            serialize.threading_from_json,
        ),
        (lambda: gamma_star_prefix(standard_family(), 2, F(1, 4), 4), serialize.run_to_json, serialize.run_from_json),
        (
            lambda: jump_infeasibility(build_thread("half-bound", 4, F(1, 2)), [F(1, 8)], 1, 3),
            serialize.certificate_to_json,
            serialize.certificate_from_json,
        ),
        (lambda: build_skein(SkeinConfig(depth=1)), serialize.skein_to_json, serialize.skein_from_json),
    ],
)
def test_round_trip(make, dump, load):
    obj = make()
    back = load(through_text(dump(obj)))
    assert back == obj
    assert serialize.dumps(dump(back)) == serialize.dumps(dump(obj))


def test_to_json_dispatch(T_A):
    assert serialize.to_json(T_A) == serialize.thread_to_json(T_A)
    with pytest.raises(TypeError):
        serialize.to_json(object())


def test_csv_matrix(T_A):
    text = serialize.thread_matrix_csv(T_A, [0, F(1, 2), 1])
    assert text.splitlines() == [",0/1,1/2,1/1", "0/1,0/1,1/2,1/2", "1/2,1/2,0/1,1/2", "1/1,1/2,1/2,0/1"]


@st.composite
def threads(draw):
    cuts = sorted(set(draw(st.lists(st.integers(1, 63), max_size=8))))
    gaps = [(F(a, 64), F(b, 64)) for a, b in zip(cuts[::2], cuts[1::2])]
    return from_gaps(1, F(draw(st.integers(1, 64)), 64), gaps)


@settings(max_examples=50, deadline=None)
@given(threads())
def test_thread_round_trip_property(t):
    assert serialize.thread_from_json(through_text(serialize.thread_to_json(t))) == t
