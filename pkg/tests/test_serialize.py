import json

import pytest

from parikh_kit.apa import epsca_to_detapa
from parikh_kit.automata import Automaton, words_up_to
from parikh_kit.bsl import BslLanguage, Socle, canonical_epsca
from parikh_kit.cli import model_accepts
from parikh_kit.errors import ModelFormatError
from parikh_kit.flatten import run_bsl_pipeline
from parikh_kit.models import PA, epsca_to_ca
from parikh_kit.serialize import dumps, from_dict, load_model, to_dict, to_dot
from parikh_kit.semilinear import LinearSet, SemilinearSet

DIAG = SemilinearSet(2, (LinearSet((0, 0), ((1, 1),)),))
BSL = BslLanguage(Socle(["a", "b"]), DIAG)
AB = Automaton.build(2, "ab", [(0, "a", 0), (0, "b", 1), (1, "b", 1)], 0, [0, 1])


def all_models():
    K = canonical_epsca(BSL)
    return [
        AB,
        PA(AB, ((1, 0), (0, 1), (0, 1)), DIAG),
        K,
        epsca_to_ca(K),
        epsca_to_detapa(K),
        run_bsl_pipeline(BSL).cqdd,
        BSL,
    ]


@pytest.mark.parametrize("model", all_models(), ids=lambda m: type(m).__name__)
def test_round_trip_preserves_language(model):
    data = json.loads(dumps(model))
    again = from_dict(data)
    assert type(again) is type(model)
    for w in words_up_to("ab", 6):
        assert model_accepts(again, w) == model_accepts(model, w)


def test_detection_without_kind():
    for model in all_models():
        data = to_dict(model)
        data.pop("kind")
        assert type(from_dict(data)) is type(model)


def test_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ModelFormatError):
        load_model(bad)
    with pytest.raises(ModelFormatError):
        from_dict({"states": 1})
    with pytest.raises(ModelFormatError):
        from_dict({"states": 1, "alphabet": ["a"], "transitions": [{"from": 0, "label": "z", "to": 0}]})
    with pytest.raises(ModelFormatError):
        from_dict([1, 2])


def test_dot_output():
    dot = to_dot(AB)
    assert dot.count("shape=circle") + dot.count("shape=doublecircle") == 2
    assert 'label="ε #1"' in to_dot(canonical_epsca(BSL))
    Q = run_bsl_pipeline(BSL).cqdd
    assert to_dot(Q).count("subgraph cluster_") == len(Q.components)
    assert to_dot(AB) == to_dot(AB)
