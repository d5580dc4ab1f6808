import numpy as np
import pytest

from dea_frontier import Dataset, EvaluationResult, Form, ModelSpec, RTS, validate


def test_appendix_is_valid(appendix):
    assert validate(appendix) == []
    assert appendix.capital_names == ("capital",)


def test_negative_cell_reported_with_coordinates(appendix):
    x = np.array(appendix.inputs)
    x[2, 1] = -1.0
    bad = Dataset(appendix.unit_names, appendix.input_names, appendix.output_names,
                  x, appendix.outputs, (0,))
    (v,) = validate(bad)
    assert (v.rule, v.unit, v.column) == ("nonnegative", 2, "labour")


def test_all_zero_outputs_reported(appendix):
    y = np.array(appendix.outputs)
    y[4] = 0.0
    bad = Dataset(appendix.unit_names, appendix.input_names, appendix.output_names,
                  appendix.inputs, y, (0,))
    (v,) = validate(bad)
    assert v.rule == "positive-output" and v.unit == 4


@pytest.mark.parametrize("cap, rule", [((0, 0), "capital"), ((5,), "capital")])
def test_capital_designation(appendix, cap, rule):
    bad = Dataset(appendix.unit_names, appendix.input_names, appendix.output_names,
                  appendix.inputs, appendix.outputs, cap)
    assert [v.rule for v in validate(bad)] == [rule]


def test_shape_and_nan():
    ds = Dataset(["a"], ["x"], ["y"], [[1.0, 2.0]], [[1.0]])
    assert validate(ds)[0].rule == "shape"
    ds = Dataset(["a"], ["x"], ["y"], [[np.nan]], [[1.0]])
    assert [v.rule for v in validate(ds)] == ["nonnegative"]
    assert validate(Dataset([], ["x"], ["y"], [], []))[0].rule == "size"


def test_duplicate_names():
    ds = Dataset(["a", "a"], ["x"], ["y"], [[1.0], [2.0]], [[1.0], [1.0]])
    assert [v.rule for v in validate(ds)] == ["duplicate"]


def test_validate_is_pure(appendix):
    y = np.array(appendix.outputs)
    y[0] = 0
    bad = Dataset(appendix.unit_names, appendix.input_names, appendix.output_names,
                  appendix.inputs, y, (0,))
    assert validate(bad) == validate(bad)


def test_dataset_is_immutable(appendix):
    with pytest.raises(ValueError):
        appendix.inputs[0, 0] = 1.0
    copy = appendix.replace_rows([0], [1.0, 1.0], [1.0])
    assert appendix.inputs[0, 0] == 10.0 and copy.inputs[0, 0] == 1.0
    assert copy != appendix


def test_model_spec_rules():
    assert ModelSpec().form is Form.ADDITIVE
    with pytest.raises(ValueError):
        ModelSpec(Form.RADIAL_ND)
    with pytest.raises(ValueError):
        ModelSpec(Form.RADIAL_ND, RTS.VRS, (0,))
    with pytest.raises(ValueError):
        ModelSpec(Form.RADIAL_ND, RTS.CRS, (0, 1)).check(2)
    ModelSpec("radial", "vrs").check(2)


def test_result_clamps_roundoff():
    r = EvaluationResult(0, None, [1.0, -1e-12], [-5e-8], [0.0], 0.0)
    assert r.lambdas[1] == 0.0 and r.input_slacks[0] == 0.0
    r = EvaluationResult(0, None, [-1e-3], [0.0], [0.0], 0.0)
    assert r.lambdas[0] == -1e-3
