import json
import os

from voalab.cache import BlockCache, cache_gc, canonical, default_cache_dir


def test_roundtrip_and_counters(tmp_path):
    c = BlockCache(tmp_path)
    key = {"space": "N4", "weight": "3/2"}
    assert c.get(key) is None
    c.put(key, [["1/2", "e^[0,0,1,0]"]])
    assert c.get(key) == [["1/2", "e^[0,0,1,0]"]]
    assert (c.hits, c.misses) == (1, 1)


def test_file_name_is_key_hash(tmp_path):
    c = BlockCache(tmp_path)
    p = c.put({"b": 1, "a": 2}, 5)
    assert p == c.path_for({"a": 2, "b": 1})
    body = json.loads(p.read_text())
    assert body["key"] == {"a": 2, "b": 1}
    assert canonical(body["payload"]) == "5"


def test_corruption_is_quarantined(tmp_path):
    c = BlockCache(tmp_path)
    p = c.put("k", {"x": 1})
    body = json.loads(p.read_text())
    body["payload"] = {"x": 2}
    p.write_text(json.dumps(body))
    assert c.get("k") is None
    assert not p.exists()
    assert (tmp_path / "quarantine" / p.name).exists()
    assert c.quarantined == [p.name]


def test_truncated_file_is_quarantined(tmp_path):
    c = BlockCache(tmp_path)
    p = c.put("k", list(range(50)))
    p.write_text(p.read_text()[:20])
    assert c.get("k") is None
    assert c.quarantined == [p.name]


def test_gc_evicts_least_recently_used(tmp_path):
    c = BlockCache(tmp_path)
    paths = [c.put(f"k{i}", "x" * 100) for i in range(3)]
    for t, p in enumerate(paths):
        os.utime(p, (1000 + t, 1000 + t))
    c.get("k0")  # touching makes k0 the most recent
    size = paths[0].stat().st_size
    summary = cache_gc(tmp_path, 2 * size)
    assert summary.evicted == [paths[1].name]
    assert summary.files_before == 3
    assert summary.bytes_after == 2 * size


def test_gc_on_missing_or_empty_cache(tmp_path):
    assert cache_gc(tmp_path / "absent", 0).evicted == []
    s = cache_gc(tmp_path, 0)
    assert (s.files_before, s.evicted) == (0, [])


def test_gc_skips_while_run_in_progress(tmp_path):
    c = BlockCache(tmp_path)
    c.put("k", 1)
    with c.run_lock():
        s = cache_gc(tmp_path, 0)
        assert s.skipped_reason.startswith("run in progress")
        assert s.evicted == []
    assert len(cache_gc(tmp_path, 0).evicted) == 1


def test_gc_ignores_stale_lock(tmp_path):
    c = BlockCache(tmp_path)
    c.put("k", 1)
    (tmp_path / "run.lock").write_text("999999999")
    assert len(cache_gc(tmp_path, 0).evicted) == 1


def test_default_dir_follows_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("VOALAB_CACHE_DIR", str(tmp_path / "c"))
    assert default_cache_dir() == tmp_path / "c"
