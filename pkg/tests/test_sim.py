"""Recovery simulator: exact read accounting, timing trends, determinism."""

from fractions import Fraction

import pytest

from mdr6.sim import DiskModel, SimConfig, compare, simulate

MODEL = DiskModel()


def test_read_counts_exact_per_disk():
    stripes = 6
    for k in (2, 3):
        r = 1 << k
        mdr = simulate(SimConfig(k=k, stripe_count=stripes, strategy="mdr"), MODEL)
        assert all(n == stripes * r // 2 for n in mdr.blocks_read_per_disk.values())
        assert mdr.total_blocks_read == stripes * (k + 1) * r // 2
        conv = simulate(
            SimConfig(k=k, stripe_count=stripes, strategy="conventional"), MODEL
        )
        assert conv.total_blocks_read == stripes * k * r


def test_read_volume_ratios():
    for k, expected in ((3, Fraction(2, 3)), (8, Fraction(9, 16))):
        report = simulate(SimConfig(k=k, stripe_count=4, strategy="mdr"), MODEL)
        assert report.read_volume_ratio == expected
    assert float(Fraction(9, 16)) == 0.5625


def test_compare_ratio_is_plan_ratio_for_any_model():
    models = [
        MODEL,
        DiskModel(seek_ms=1.0, rotational_ms=20.0, transfer_bytes_per_ms=5000.0),
        DiskModel(seek_ms=30.0, rotational_ms=0.5, transfer_bytes_per_ms=1e6, seq_window_blocks=2),
    ]
    for model in models:
        comp = compare(
            SimConfig(k=4, stripe_count=5, strategy="conventional"),
            SimConfig(k=4, stripe_count=5, strategy="mdr"),
            model,
        )
        assert comp.read_ratio == Fraction(5, 8)


@pytest.mark.parametrize("k", [2, 3, 8])
def test_access_time_ratio_below_one(k):
    models = [
        MODEL,
        DiskModel(seek_ms=2.0, rotational_ms=1.0, transfer_bytes_per_ms=20000.0),
        DiskModel(seek_ms=12.0, rotational_ms=6.0, transfer_bytes_per_ms=300000.0, seq_window_blocks=2),
    ]
    for model in models:
        for block_size in (512, 4096):
            comp = compare(
                SimConfig(k=k, stripe_count=8, strategy="conventional", block_size=block_size),
                SimConfig(k=k, stripe_count=8, strategy="mdr", block_size=block_size),
                model,
            )
            assert comp.access_time_ratio < 1.0


def test_identical_configs_ratio_one():
    cfg = SimConfig(k=3, stripe_count=4, strategy="mdr")
    comp = compare(cfg, cfg, MODEL)
    assert comp.read_ratio == 1
    assert comp.access_time_ratio == pytest.approx(1.0)
    assert comp.recovery_time_ratio == pytest.approx(1.0)


def test_compare_rejects_differing_configs():
    with pytest.raises(ValueError):
        compare(
            SimConfig(k=2, stripe_count=4, strategy="conventional"),
            SimConfig(k=2, stripe_count=5, strategy="mdr"),
            MODEL,
        )


def test_seed_determinism():
    cfg = SimConfig(k=3, stripe_count=10, strategy="mdr", background_rate=300.0, seed=9)
    assert simulate(cfg, MODEL) == simulate(cfg, MODEL)


def test_offline_single_stripe_no_pipeline():
    # k=1 conventional: two contiguous reads from one disk, then two writes
    cfg = SimConfig(k=1, stripe_count=1, strategy="conventional", block_size=512)
    report = simulate(cfg, MODEL)
    transfer = 512 / MODEL.transfer_bytes_per_ms
    position = MODEL.seek_ms + MODEL.rotational_ms
    read_phase = position + 2 * transfer
    write_phase = position + 2 * transfer
    assert report.total_time_ms == pytest.approx(read_phase + write_phase)


def test_background_requests_only_online():
    offline = simulate(SimConfig(k=2, stripe_count=4, strategy="mdr"), MODEL)
    assert offline.background_requests == 0
    online = simulate(
        SimConfig(k=2, stripe_count=4, strategy="mdr", background_rate=500.0, seed=1),
        MODEL,
    )
    assert online.background_requests > 0


def test_online_slower_than_offline():
    offline = simulate(SimConfig(k=3, stripe_count=8, strategy="mdr"), MODEL)
    online = simulate(
        SimConfig(k=3, stripe_count=8, strategy="mdr", background_rate=2000.0, seed=3),
        MODEL,
    )
    assert online.total_time_ms >= offline.total_time_ms


def test_trace_rows_recorded():
    trace: list = []
    report = simulate(SimConfig(k=2, stripe_count=3, strategy="mdr"), MODEL, trace=trace)
    reads = [row for row in trace if row[2] == "read"]
    writes = [row for row in trace if row[2] == "write"]
    assert len(reads) == report.total_blocks_read
    assert len(writes) == 3 * 4  # stripe_count * r


def test_report_header_notes_divergence():
    report = simulate(SimConfig(k=2, stripe_count=2, strategy="mdr"), MODEL)
    assert "bus" in report.notes
    doc = report.to_document()
    assert doc["strategy"] == "mdr"


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(k=2, stripe_count=0, strategy="mdr")
    with pytest.raises(ValueError):
        SimConfig(k=2, stripe_count=1, strategy="bogus")
    with pytest.raises(ValueError):
        DiskModel(seek_ms=0)
