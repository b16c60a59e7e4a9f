import json

import pytest

from src.commands.dispatch import EXIT_CAP, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, Command, dispatch
from src.utils.codec import emit_report
from src.utils.errors import InvalidParams


@pytest.fixture
def write(tmp_path):
    def writer(name, document):
        path = tmp_path / name
        data = document if isinstance(document, (bytes, str)) else json.dumps(document)
        path.write_bytes(data.encode() if isinstance(data, str) else data)
        return str(path)
    return writer


@pytest.fixture
def family_file(write, small_family):
    return write("family.json", emit_report(small_family))


@pytest.fixture
def instance_file(write, worked_instance):
    return write("instance.json", emit_report(worked_instance))


def invoke(runner, cli, *args, **kwargs):
    return runner.invoke(cli, [str(arg) for arg in args], catch_exceptions=False, **kwargs)


class TestExtract:
    def test_largest_delta_system(self, runner, cli, family_file):
        result = invoke(runner, cli, "extract-delta", family_file)
        assert result.exit_code == EXIT_OK
        assert result.stdout_bytes == b'{"certificate":{"indices":[0,1,3],"kernel":[1]},"format":1}\n'

    def test_oracle_with_size(self, runner, cli, family_file):
        result = invoke(runner, cli, "extract-delta", "--oracle", "--r", 3, family_file)
        assert json.loads(result.stdout_bytes)["certificate"] == {"indices": [0, 1, 3], "kernel": [1]}

    def test_size_out_of_reach(self, runner, cli, family_file):
        result = invoke(runner, cli, "extract-delta", "--r", 5, family_file)
        assert result.exit_code == EXIT_NEGATIVE
        assert json.loads(result.stdout_bytes) == {"certificate": None, "format": 1}

    def test_exhaustive_cap(self, runner, cli, family_file):
        result = invoke(runner, cli, "--exhaustive-cap", 2, "extract-delta", "--oracle", "--r", 2, family_file)
        assert result.exit_code == EXIT_CAP
        error = json.loads(result.stdout_bytes)["error"]
        assert error["type"] == "CapExceeded"
        assert (error["limit"], error["requested"]) == (2, 4)

    def test_double_delta(self, runner, cli, write, worked_double_family):
        path = write("dfam.json", emit_report(worked_double_family))
        result = invoke(runner, cli, "extract-double-delta", "--s", 2, "--t", 3, path)
        assert result.exit_code == EXIT_OK
        cert = json.loads(result.stdout_bytes)["certificate"]
        assert cert == {"m": 1, "I": [0, 1], "J": {"0": [0, 1, 2], "1": [0, 1, 2]},
                        "A_blocks": {"0": [0], "1": [0]}, "A": [0]}

    def test_double_delta_target_too_high(self, runner, cli, write, worked_double_family):
        path = write("dfam.json", emit_report(worked_double_family))
        result = invoke(runner, cli, "extract-double-delta", "--t", 4, path)
        assert result.exit_code == EXIT_NEGATIVE

    def test_wrong_document_kind(self, runner, cli, instance_file):
        result = invoke(runner, cli, "extract-delta", instance_file)
        assert result.exit_code == EXIT_ERROR
        assert json.loads(result.stdout_bytes)["error"]["type"] == "SchemaViolation"


class TestVerify:
    def test_family_bundle(self, runner, cli, write):
        bundle = {"family": {"ground_size": 5, "sets": [[1, 2], [1, 3], [1, 4]]},
                  "certificate": {"indices": [0, 1, 2], "kernel": [1]}}
        result = invoke(runner, cli, "verify", write("ok.json", bundle))
        assert result.exit_code == EXIT_OK
        assert result.stdout_bytes == b'{"format":1,"ok":true}\n'

        bundle["certificate"]["kernel"] = [2]
        result = invoke(runner, cli, "verify", write("bad.json", bundle))
        assert result.exit_code == EXIT_NEGATIVE

    def test_tampered_double_certificate(self, runner, cli, write):
        bundle = {
            "double_family": {"ground_size": 7,
                              "blocks": [[[0, 1], [0, 2], [0, 3]], [[0, 4], [0, 5], [0, 6]]]},
            "certificate": {"m": 1, "I": [0, 1], "J": {"0": [0, 1, 2], "1": [0, 1, 2]},
                            "A_blocks": {"0": [0], "1": [0]}, "A": [0]},
        }
        assert invoke(runner, cli, "verify", write("good.json", bundle)).exit_code == EXIT_OK

        bundle["certificate"]["A_blocks"]["1"] = [1]
        result = invoke(runner, cli, "verify", write("tampered.json", bundle))
        assert result.exit_code == EXIT_NEGATIVE
        report = json.loads(result.stdout_bytes)
        assert report["ok"] is False
        assert report["conditions"]["3_within_block"] is False

    def test_bundle_of_emitted_documents(self, runner, cli, write):
        generated = invoke(runner, cli, "gen", "family", "--seed", 4, "--set-count", 6)
        extracted = invoke(runner, cli, "extract-delta", write("family.json", generated.stdout_bytes))
        assert extracted.exit_code == EXIT_OK
        bundle = {"family": json.loads(generated.stdout_bytes),
                  "certificate": json.loads(extracted.stdout_bytes)["certificate"]}
        assert bundle["family"]["format"] == 1
        result = invoke(runner, cli, "verify", write("bundle.json", bundle))
        assert result.stdout_bytes == b'{"format":1,"ok":true}\n'


class TestTopologyVerbs:
    def test_centered_opens(self, runner, cli, write):
        space = {"points": 2, "basis": [[0], [1], [0, 1]]}
        result = invoke(runner, cli, "centered", write("a.json", {"space": space, "opens": [0, 2]}))
        assert (result.exit_code, json.loads(result.stdout_bytes)["centered"]) == (EXIT_OK, True)
        result = invoke(runner, cli, "centered", write("b.json", {"space": space, "opens": [0, 1]}))
        assert (result.exit_code, json.loads(result.stdout_bytes)["centered"]) == (EXIT_NEGATIVE, False)

    def test_centered_boxes(self, runner, cli, write, worked_instance):
        document = {"instance": json.loads(emit_report(worked_instance)), "indices": [0, 1, 2]}
        document["instance"].pop("format")
        result = invoke(runner, cli, "centered", write("boxes.json", document))
        assert result.exit_code == EXIT_OK
        assert json.loads(result.stdout_bytes) == {"centered": True, "linked": True, "format": 1}

    def test_bare_space_is_validated(self, runner, cli, write):
        result = invoke(runner, cli, "centered", write("space.json", {"points": 3, "basis": [[0], [1]]}))
        assert result.exit_code == EXIT_NEGATIVE
        report = json.loads(result.stdout_bytes)
        assert report["ok"] is False
        assert report["violations"] == [{"kind": "cover", "point": 2, "members": []}]

    def test_property(self, runner, cli, write):
        discrete = write("discrete.json", {"points": 2, "basis": [[0], [1], [0, 1]]})
        result = invoke(runner, cli, "property", "--n", 2, "--k", 2, discrete)
        assert result.exit_code == EXIT_NEGATIVE
        assert json.loads(result.stdout_bytes) == {"holds": False, "counterexample": [0, 1], "format": 1}

        sierpinski = write("sierpinski.json", {"points": 2, "basis": [[0], [0, 1]]})
        assert invoke(runner, cli, "property", "--n", 3, "--k", 3, sierpinski).exit_code == EXIT_OK

    def test_property_needs_arguments(self, runner, cli, write):
        path = write("space.json", {"points": 1, "basis": [[0]]})
        result = runner.invoke(cli, ["property", path])
        assert result.exit_code == 2

    def test_profile(self, runner, cli, write):
        path = write("space.json", {"points": 1, "basis": [[0]]})
        result = invoke(runner, cli, "property", "--profile", 2, path)
        assert result.exit_code == EXIT_OK
        assert "profile" in json.loads(result.stdout_bytes)


class TestPipeline:
    def test_worked_instance(self, runner, cli, instance_file):
        result = invoke(runner, cli, "pipeline", "--s", 2, "--t", 2, instance_file)
        assert result.exit_code == EXIT_OK
        report = json.loads(result.stdout_bytes)
        assert report["ok"] is True
        assert report["J"] == [0, 1, 2, 3, 4, 5]
        assert report["failed_stage"] is None
        assert report["certificates"]["block_selections"] == {"0": [0, 1, 2], "1": [3, 4, 5]}

    def test_irreconcilable(self, runner, cli, write):
        instance = {"factors": [{"points": 2, "basis": [[0], [1], [0, 1]]}],
                    "boxes": [{"support": {"0": 0}}, {"support": {"0": 1}},
                              {"support": {"0": 0}}, {"support": {"0": 1}}],
                    "block_boundaries": [0, 2, 4]}
        result = invoke(runner, cli, "pipeline", write("clash.json", instance))
        assert result.exit_code == EXIT_NEGATIVE
        assert json.loads(result.stdout_bytes)["failed_stage"] == "select_kernel_centered"

    @pytest.fixture
    def verb_args(self, write, small_family, worked_double_family, worked_instance, sierpinski, discrete2):
        family = json.loads(emit_report(small_family))
        return {
            "extract-delta": ["extract-delta", write("family.json", family)],
            "extract-double-delta": ["extract-double-delta", "--t", 3, write("dfam.json", emit_report(worked_double_family))],
            "verify": ["verify", write("bundle.json", {"family": family,
                                                       "certificate": {"indices": [0, 1, 3], "kernel": [1]}})],
            "centered": ["centered", write("opens.json", {"space": json.loads(emit_report(sierpinski)), "opens": [1, 0]})],
            "property": ["property", "--n", 3, "--k", 2, write("space.json", emit_report(discrete2))],
            "pipeline": ["pipeline", write("instance.json", emit_report(worked_instance))],
            "gen": ["gen", "instance", "--seed", 5],
        }

    @pytest.mark.parametrize("verb", ["extract-delta", "extract-double-delta", "verify", "centered",
                                      "property", "pipeline", "gen"])
    def test_bytes_do_not_depend_on_workers(self, runner, cli, verb_args, verb):
        results = [invoke(runner, cli, "--workers", workers, *verb_args[verb])
                   for workers in (1, 4, 8) for _ in range(3)]
        assert {result.exit_code for result in results} == {EXIT_OK}
        assert len({result.stdout_bytes for result in results}) == 1


class TestGen:
    def test_same_seed_same_bytes(self, runner, cli):
        first = invoke(runner, cli, "gen", "instance", "--seed", 5)
        second = invoke(runner, cli, "gen", "instance", "--seed", 5)
        assert first.exit_code == EXIT_OK
        assert first.stdout_bytes == second.stdout_bytes

    def test_empty_family(self, runner, cli):
        result = invoke(runner, cli, "gen", "family", "--seed", 1, "--set-count", 0)
        assert result.stdout_bytes == b'{"format":1,"ground_size":10,"sets":[]}\n'

    def test_output_feeds_other_verbs(self, runner, cli, write):
        generated = invoke(runner, cli, "gen", "instance", "--seed", 3, "--box-count", 6)
        path = write("generated.json", generated.stdout_bytes)
        result = invoke(runner, cli, "pipeline", path)
        assert result.exit_code in (EXIT_OK, EXIT_NEGATIVE)

    def test_params_file_with_override(self, runner, cli, write):
        path = write("params.json", {"seed": 2, "catalog_id": 2, "point_count": 3})
        result = invoke(runner, cli, "gen", "space", "--params", path)
        assert json.loads(result.stdout_bytes)["basis"] == [[0], [0, 1], [0, 1, 2]]
        result = invoke(runner, cli, "gen", "space", "--params", path, "--point-count", 1)
        assert json.loads(result.stdout_bytes)["basis"] == [[0]]

    def test_invalid_knob(self, runner, cli):
        result = invoke(runner, cli, "gen", "family", "--min-set-size", 5, "--max-set-size", 2)
        assert result.exit_code == EXIT_ERROR
        assert json.loads(result.stdout_bytes)["error"]["type"] == "InvalidParams"


class TestInputHandling:
    def test_strict_rejects_unknown_fields(self, runner, cli, write):
        path = write("family.json", {"ground_size": 3, "sets": [[0], [0]], "note": "x"})
        result = invoke(runner, cli, "extract-delta", path)
        assert result.exit_code == EXIT_ERROR
        assert json.loads(result.stdout_bytes)["error"]["path"] == "$"

    def test_lax_accepts_unknown_fields(self, runner, cli, write):
        path = write("family.json", {"ground_size": 3, "sets": [[0], [0]], "note": "x"})
        result = invoke(runner, cli, "--lax", "extract-delta", path)
        assert result.exit_code == EXIT_OK

    def test_malformed_input(self, runner, cli, write):
        result = invoke(runner, cli, "extract-delta", write("broken.json", '{"ground_size": 3,\n'))
        assert result.exit_code == EXIT_ERROR
        error = json.loads(result.stdout_bytes)["error"]
        assert error["type"] == "SchemaViolation"
        assert error["line"] is not None

    def test_missing_file(self, runner, cli, tmp_path):
        result = invoke(runner, cli, "verify", tmp_path / "absent.json")
        assert result.exit_code == EXIT_ERROR

    def test_stdin(self, runner, cli, small_family):
        result = invoke(runner, cli, "extract-delta", "-", input=emit_report(small_family))
        assert result.exit_code == EXIT_OK

    def test_command_requires_input(self):
        with pytest.raises(InvalidParams):
            Command("verify")
        with pytest.raises(InvalidParams):
            Command("launch", "x.json")

    def test_dispatch_directly(self, family_file):
        status, output = dispatch(Command("extract-delta", family_file, {"config_name": "testing"}))
        assert status == EXIT_OK
        assert output.endswith(b"\n")
