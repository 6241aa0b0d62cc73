"""Tests for the `config_parsing` module."""

from pathlib import Path

import pytest

from FrameLab.config import DEFAULT_OUTPUT_DIR, DEFAULT_SEED
from FrameLab.config_parsing import build_config, load_batch_file, load_config_file, validate_config
from FrameLab.schemas import ApproximateParameters, CarlesonParameters
from FrameLab.utils.exceptions import ConfigError
from tests.conftest import WriteConfigFunc


def test_defaults_without_a_file() -> None:
    config = build_config("represent")
    assert config.output == DEFAULT_OUTPUT_DIR
    assert config.seed == DEFAULT_SEED
    assert config.typed_parameters().frame_source == "onb(6)"


def test_json_file_with_parameter_table(write_config: WriteConfigFunc) -> None:
    path = write_config("approx.json", {"kind": "approximate", "parameters": {"lambda": 1.5, "j": 2}})
    params = build_config("approximate", path).typed_parameters()
    assert isinstance(params, ApproximateParameters)
    assert params.lam == 1.5
    assert params.epsilon == 0.25


def test_toml_file_with_flat_keys(write_config: WriteConfigFunc) -> None:
    path = write_config("carleson.toml", 'kind = "carleson"\nalpha = 3.0\nK = 6\nprofile_lengths = [12, 24]\n')
    params = build_config("carleson", path).typed_parameters()
    assert isinstance(params, CarlesonParameters)
    assert (params.alpha, params.K, params.profile_lengths) == (3.0, 6, [12, 24])


def test_unknown_extension_falls_back_to_toml(write_config: WriteConfigFunc) -> None:
    path = write_config("settings.conf", "seed = 11\n[parameters]\nn_max = 4\n")
    assert load_config_file(path) == {"seed": 11, "parameters": {"n_max": 4}}


def test_command_line_values_take_precedence(write_config: WriteConfigFunc, tmp_path: Path) -> None:
    path = write_config("diag.json", {"kind": "diagnostics", "seed": 5, "output": "from-file"})
    config = build_config("diagnostics", path, tmp_path / "cli-out", 9)
    assert config.seed == 9
    assert config.output == tmp_path / "cli-out"
    assert build_config("diagnostics", path).output == Path("from-file")


@pytest.mark.parametrize(
    "content, field",
    [
        ({"kind": "carleson"}, "kind"),
        ({"j": 0}, "parameters.j"),
        ({"bogus": 1}, "parameters.bogus"),
        ({"parameters": {"lambda": 1.0}}, "parameters.lambda"),
        ({"j": 2, "parameters": {"j": 3}}, "parameters.j"),
        ({"seed": "not a number"}, "seed"),
        ({"timeout": 0}, "timeout"),
    ],
)
def test_errors_name_the_offending_field(write_config: WriteConfigFunc, content, field: str) -> None:
    path = write_config("bad.json", content)
    with pytest.raises(ConfigError) as info:
        build_config("approximate", path)
    assert info.value.field == field
    assert f"Invalid value for '{field}'" in str(info.value)


def test_timeout_is_a_top_level_key(write_config: WriteConfigFunc) -> None:
    path = write_config("slow.json", {"kind": "represent", "timeout": 12.5, "frame_source": "onb(3)"})
    config = build_config("represent", path)
    assert config.timeout == 12.5
    assert config.parameters == {"frame_source": "onb(3)"}


def test_model_level_errors_point_at_parameters() -> None:
    with pytest.raises(ConfigError, match="lambdas are required") as info:
        validate_config({"kind": "carleson", "sequence": "list"})
    assert info.value.field == "parameters"


@pytest.mark.parametrize(
    "name, content, message",
    [
        ("broken.json", "{", "invalid JSON"),
        ("broken.toml", "kind = ", "invalid TOML"),
        ("list.json", "[1, 2]", "must hold a table"),
    ],
)
def test_unreadable_files(write_config: WriteConfigFunc, name: str, content: str, message: str) -> None:
    with pytest.raises(ConfigError, match=message):
        load_config_file(write_config(name, content))


def test_batch_file_assigns_distinct_outputs(write_config: WriteConfigFunc) -> None:
    path = write_config(
        "batch.json",
        {"experiments": [{"kind": "represent"}, {"kind": "carleson", "K": 4}, {"kind": "represent", "output": "x"}]},
    )
    configs = load_batch_file(path)
    assert [c.kind for c in configs] == ["represent", "carleson", "represent"]
    assert configs[0].output == DEFAULT_OUTPUT_DIR / "00-represent"
    assert configs[1].output == DEFAULT_OUTPUT_DIR / "01-carleson"
    assert configs[2].output == Path("x")


@pytest.mark.parametrize(
    "content, field",
    [
        ({"experiments": []}, "experiments"),
        ({"runs": [{"kind": "represent"}]}, "experiments"),
        ({"experiments": [{"kind": "represent"}, 3]}, "experiments.1"),
        ({"experiments": [{"kind": "represent"}, {"kind": "approximate", "j": 0}]}, "experiments.1.parameters.j"),
        ({"experiments": [{"kind": "represent", "output": "o"}, {"kind": "carleson", "output": "o"}]}, "experiments"),
    ],
)
def test_batch_file_errors(write_config: WriteConfigFunc, content, field: str) -> None:
    with pytest.raises(ConfigError) as info:
        load_batch_file(write_config("batch.json", content))
    assert info.value.field == field
