import os
import subprocess
import sys

import pytest

import socsim

SCENARIOS = os.environ.get("SOCSIM_SCENARIO_DIR", "scenarios")


def scn(name):
    return os.path.join(SCENARIOS, name + ".scn")


def test_version():
    assert socsim.__version__


def test_iou_exact_third():
    a = socsim.BoundingBox(0, 0, 2, 2)
    b = socsim.BoundingBox(1, 0, 3, 2)
    assert socsim.iou(a, b) == 1.0 / 3.0
    assert socsim.iou(a, a) == 1.0


def test_cloud_coverage():
    data = [1] * 256 + [0] * 768
    mask = socsim.Tensor.q8((1, 32, 32, 1), 1.0, 0, data)
    assert socsim.cloud_coverage(mask) == 25.0


def test_quantize_round_trip():
    values = [0.0, 1.0, -3.5, 63.5]
    codes = socsim.quantize(values, 0.5)
    assert codes == [0, 2, -7, 127]
    back = socsim.dequantize(codes, 0.5)
    assert all(abs(v - b) <= 0.25 for v, b in zip(values, back))


def test_conv_identity():
    t = socsim.Tensor.q8((1, 2, 2, 1), 0.5, 0, [10, -5, 0, 127])
    w = socsim.Tensor.q8((1, 1, 1, 1), 1.0, 0, [1])
    out = socsim.conv2d(t, w, [0], stride=1, padding="valid", out_scale=0.5)
    assert out.codes == t.codes


def test_kernel_blob_round_trip():
    data = socsim.embed_blob("conv2d", 0, b"\x01\x02")
    blob = socsim.load_blob(data)
    assert blob["name"] == "conv2d"
    assert blob["payload"] == b"\x01\x02"
    with pytest.raises(RuntimeError):
        socsim.load_blob(b"XXXX" + data[4:])


def test_run_inference_backends_agree():
    outs = [
        socsim.run_inference("cloud_unet", "cloud_demo_32", backend, seed=25)
        for backend in ("cpu", "simd", "gpu")
    ]
    summaries = {o["summary"] for o in outs}
    assert len(summaries) == 1
    assert outs[2]["stats"]["kernel_launches"] == 6
    assert outs[0]["stats"]["kernel_launches"] == 0


def test_scenario_run_is_deterministic():
    path = scn("iso_cloud_cpu")
    assert socsim.validate_scenario(path) == []
    first = socsim.run_scenario(path)
    second = socsim.run_scenario(path)
    assert first == second
    assert "part.cloud.cycles=" in first


def test_trace_lines_are_ordered():
    trace = socsim.run_trace(scn("iso_cloud_simd"))
    ticks = [int(line.split()[0].split("=")[1]) for line in trace.splitlines()]
    assert ticks == sorted(ticks)
    assert any("kind=step_exec" in line for line in trace.splitlines())


@pytest.mark.skipif("SOCSIM_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_codes(tmp_path):
    cli = os.environ["SOCSIM_CLI"]
    ok = subprocess.run([cli, "validate", scn("iso_cloud_cpu")], capture_output=True)
    assert ok.returncode == 0

    bad = tmp_path / "bad.scn"
    bad.write_text(
        "[schedule]\nmajor_frame = 100\nwindow = 0, 0, 60, a\nwindow = 0, 40, 60, a\n"
        "[partition a]\nkind = workload\nworkload = cloud_unet\nbackend = cpu\n"
        "image = cloud_demo_32\n"
    )
    invalid = subprocess.run([cli, "validate", str(bad)], capture_output=True)
    assert invalid.returncode == 2

    run = subprocess.run(
        [cli, "run", scn("iso_cloud_cpu"), "--report", "records"],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0
    assert "part.cloud.cycles=" in run.stdout


@pytest.mark.skipif("SOCSIM_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_bench_band_violation_exits_3(tmp_path):
    # copy the shipped scenarios, then detune the calibration so the
    # simd speedup bands cannot hold
    import shutil

    for name in os.listdir(SCENARIOS):
        if name.endswith(".scn") or name.endswith(".cfg"):
            shutil.copy(os.path.join(SCENARIOS, name), tmp_path / name)
    costs = tmp_path / "default_costs.cfg"
    text = costs.read_text().replace("simd_cycles_per_op = 1.875", "simd_cycles_per_op = 10")
    costs.write_text(text)

    cli = os.environ["SOCSIM_CLI"]
    result = subprocess.run(
        [cli, "bench-suite", "--dir", str(tmp_path)], capture_output=True, text=True
    )
    assert result.returncode == 3
    assert "FAIL" in result.stdout
