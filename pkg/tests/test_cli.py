import json
from fractions import Fraction as F

import pytest

from lnatcut.cli import main, parse_instance, serialize_instance
from lnatcut.errors import ParseError


@pytest.fixture()
def mixing_file(tmp_path):
    path = tmp_path / "mixing.json"
    path.write_text(
        json.dumps(
            {
                "version": 1,
                "function": {
                    "type": "gen_int_mixing",
                    "q": ["4/5", "1/2", "1/5"],
                },
            }
        )
    )
    return str(path)


@pytest.fixture()
def cmix_file(tmp_path):
    path = tmp_path / "cmix.json"
    path.write_text(
        json.dumps(
            {
                "version": 1,
                "function": {
                    "type": "cmix",
                    "q": ["8/10", "5/10", "2/10", "1/10"],
                },
                "cycles": [[[1, 4], [4, 3], [3, 1]]],
            }
        )
    )
    return str(path)


@pytest.fixture()
def demo_file(tmp_path):
    path = tmp_path / "demo.json"
    path.write_text(json.dumps({"version": 1, "function": {"type": "nonconvex_demo"}}))
    return str(path)


class TestParsing:
    def test_mixing_instance(self, mixing_file):
        inst = parse_instance(mixing_file)
        assert inst.function is not None
        assert inst.mixing_instance is not None
        assert inst.function((0, 0, 1)) == F(4, 5)

    def test_unsorted_q_is_sorted_with_index_map(self, tmp_path):
        path = tmp_path / "unsorted.json"
        path.write_text(
            json.dumps(
                {
                    "version": 1,
                    "function": {"type": "gen_int_mixing", "q": ["1/5", "4/5"]},
                }
            )
        )
        inst = parse_instance(str(path))
        assert inst.mixing_instance.q == (F(4, 5), F(1, 5))
        assert inst.index_map == (2, 1)

    def test_q_at_one_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {"version": 1, "function": {"type": "gen_int_mixing", "q": ["1/1"]}}
            )
        )
        with pytest.raises(ParseError):
            parse_instance(str(path))

    def test_negative_capacity_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {
                    "version": 1,
                    "function": {"type": "mcmix", "q": ["1/2"], "c": ["-1"]},
                }
            )
        )
        with pytest.raises(Exception):
            parse_instance(str(path))

    def test_decimals_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {"version": 1, "function": {"type": "gen_int_mixing", "q": ["0.8"]}}
            )
        )
        with pytest.raises(ParseError):
            parse_instance(str(path))

    def test_missing_function(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"version": 1}))
        with pytest.raises(ParseError):
            parse_instance(str(path))

    def test_every_function_type_parses(self, tmp_path):
        specs = [
            {"type": "gen_int_mixing", "q": ["4/5", "1/2"]},
            {"type": "max_component", "n": 2},
            {
                "type": "tabulated",
                "box": {"lower": ["0"], "upper": ["1"]},
                "values": [[[0], "0"], [[1], "1/2"]],
            },
            {
                "type": "bivariate_convex_diff",
                "box": {"lower": ["0", "0"], "upper": ["1", "1"]},
                "table": [[-1, "1"], [0, "0"], [1, "1"]],
            },
            {
                "type": "quadratic_mmatrix",
                "box": {"lower": ["0", "0"], "upper": ["1", "1"]},
                "Q": [["2", "-1"], ["-1", "2"]],
                "b": ["0", "1/2"],
            },
            {
                "type": "affine_max_pair",
                "box": {"lower": ["0", "0"], "upper": ["2", "2"]},
                "a": ["1", "0"],
                "a0": "0",
                "b": ["0", "1"],
                "b0": "0",
            },
            {"type": "nonconvex_demo"},
            {
                "type": "scale",
                "alpha": "2",
                "inner": {"type": "nonconvex_demo"},
            },
            {
                "type": "dilate",
                "a": [0, 0],
                "beta": 1,
                "inner": {"type": "nonconvex_demo"},
            },
            {
                "type": "sum",
                "inner": [
                    {"type": "nonconvex_demo"},
                    {"type": "nonconvex_demo"},
                ],
            },
        ]
        for i, spec in enumerate(specs):
            path = tmp_path / f"fn{i}.json"
            path.write_text(json.dumps({"version": 1, "function": spec}))
            inst = parse_instance(str(path))
            assert inst.function is not None, spec["type"]
        mixed_specs = [
            {"type": "cmix", "q": ["1/2", "1/4"]},
            {"type": "mcmix", "q": ["1/2", "3/2"], "c": ["1", "2"]},
            {
                "type": "general_mixed",
                "box": {"lower": ["0", "0"], "upper": ["1", "1"]},
                "components": [
                    {
                        "values": [
                            [[0, 0], "0"],
                            [[0, 1], "-1"],
                            [[1, 0], "-1"],
                            [[1, 1], "-2"],
                        ]
                    },
                    {
                        "values": [
                            [[0, 0], "1"],
                            [[0, 1], "0"],
                            [[1, 0], "0"],
                            [[1, 1], "-1"],
                        ]
                    },
                ],
            },
        ]
        for i, spec in enumerate(mixed_specs):
            path = tmp_path / f"mixed{i}.json"
            path.write_text(json.dumps({"version": 1, "function": spec}))
            inst = parse_instance(str(path))
            assert inst.mixed is not None, spec["type"]

    def test_serialize_roundtrip_is_byte_identical(self, tmp_path):
        inst_dict = {
            "version": 1,
            "function": {"type": "gen_int_mixing", "q": ["4/5", "1/2"]},
            "workbox": {"lower": ["-2", "-2"], "upper": ["2", "2"]},
        }
        path = tmp_path / "inst.json"
        path.write_text(json.dumps(inst_dict))
        canonical = serialize_instance(parse_instance(str(path)))
        path2 = tmp_path / "canon.json"
        path2.write_text(canonical)
        assert serialize_instance(parse_instance(str(path2))) == canonical


class TestDispatch:
    def test_check_pass(self, demo_file, capsys):
        assert main(["check", "--property", "lnat", demo_file]) == 0
        assert "passed" in capsys.readouterr().out

    def test_check_fail_prints_witness(self, tmp_path, capsys):
        path = tmp_path / "super.json"
        path.write_text(
            json.dumps(
                {
                    "version": 1,
                    "function": {
                        "type": "tabulated",
                        "box": {"lower": ["0", "0"], "upper": ["1", "1"]},
                        "values": [
                            [[0, 0], "0"],
                            [[0, 1], "0"],
                            [[1, 0], "0"],
                            [[1, 1], "1"],
                        ],
                    },
                }
            )
        )
        assert main(["check", "--property", "lnat", str(path)]) == 1
        out = capsys.readouterr().out
        assert "witness" in out and "FAIL" in out

    def test_buildk_prints_one_based(self, tmp_path, capsys):
        path = tmp_path / "nine.json"
        path.write_text(
            json.dumps(
                {
                    "version": 1,
                    "function": {
                        "type": "gen_int_mixing",
                        "q": [f"{k}/10" for k in range(9, 0, -1)],
                    },
                }
            )
        )
        code = main(
            [
                "mixing",
                "buildk",
                "--p",
                "1,1,0,0,1,-1,0,0,-1",
                "--delta",
                "1,7,6,2,9,3,8,5,4",
                str(path),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "K = {3, 4, 6, 9}" in out

    def test_roundtrip_command(self, mixing_file, capsys):
        assert (
            main(
                [
                    "--seed",
                    "3",
                    "mixing",
                    "roundtrip",
                    "--samples",
                    "25",
                    mixing_file,
                ]
            )
            == 0
        )
        assert "0 failures" in capsys.readouterr().out

    def test_misepi_cycle_command(self, cmix_file, capsys):
        assert main(["misepi", "cycle", cmix_file]) == 0
        out = capsys.readouterr().out
        assert "match=True" in out
        assert "2*w" in out

    def test_misepi_separate_command(self, cmix_file, capsys):
        code = main(
            [
                "misepi",
                "separate",
                "--w",
                "-1",
                "--y",
                "0,0,0,0",
                "--x",
                "1/2,1/2,1/2,1/2",
                cmix_file,
            ]
        )
        assert code == 0
        assert "violation" in capsys.readouterr().out

    def test_minimize_command_json(self, demo_file, capsys):
        code = main(
            ["--format", "json", "minimize", "--workbox", "0..2,0..1", demo_file]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["optimum"] == "-1"

    def test_sepi_separate_decimal_flag(self, mixing_file, capsys):
        code = main(
            [
                "--decimal",
                "sepi",
                "separate",
                "--point",
                "1/2,1/2,1/2",
                "--w",
                "0",
                "--workbox=-2..2,-2..2,-2..2",
                mixing_file,
            ]
        )
        assert code == 0
        assert "(~" in capsys.readouterr().out

    def test_parse_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["check", "--property", "lnat", str(path)]) == 2

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_oracle_compare_sequential(self, capsys):
        assert main(["oracle", "compare", "--suite", "f_eval"]) == 0
        assert "f_eval: pass" in capsys.readouterr().out

    def test_oracle_compare_parallel(self, capsys):
        assert main(["--jobs", "2", "oracle", "compare"]) == 0
        out = capsys.readouterr().out
        for name in ("f_eval", "hull", "mixed_min", "separation"):
            assert f"{name}: pass" in out

    def test_joint_commands(self, tmp_path, capsys):
        path = tmp_path / "joint.json"
        path.write_text(
            json.dumps(
                {
                    "version": 1,
                    "functions": [
                        {"type": "gen_int_mixing", "q": ["4/5", "1/2"]},
                        {"type": "gen_int_mixing", "q": ["3/5", "2/5"]},
                    ],
                    "workbox": {"lower": ["0", "0"], "upper": ["2", "2"]},
                }
            )
        )
        code = main(
            [
                "joint",
                "separate",
                "--point",
                "1/2,1/2",
                "--w",
                "0,0",
                str(path),
            ]
        )
        assert code == 0
        assert "2 violated cuts" in capsys.readouterr().out
        code = main(
            [
                "joint",
                "member",
                "--point",
                "1,1",
                "--w",
                "2,2",
                str(path),
            ]
        )
        assert code == 0
        assert "member: True" in capsys.readouterr().out
