import json
import multiprocessing as mp
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from braidclass.cache import CACHE_VERSION, DiskCache, cache_key, default_cache_dir


def test_round_trip(tmp_path):
    c = DiskCache(tmp_path)
    assert c.get(["x", 1]) is None
    c.put(["x", 1], {"count": 4, "rows": [1, 2]})
    assert c.get(["x", 1]) == {"count": 4, "rows": [1, 2]}
    assert c.get(["x", 2]) is None


def test_key_is_content_hash():
    assert cache_key(["a", {"b": 1, "c": 2}]) == cache_key(["a", {"c": 2, "b": 1}])
    assert cache_key(["a", 1]) != cache_key(["a", "1"])
    assert len(cache_key([])) == 64


def entry_path(c, parts):
    key = cache_key(parts)
    return Path(c.root) / key[:2] / f"{key}.json"


def test_corrupted_entry_is_a_miss(tmp_path):
    c = DiskCache(tmp_path)
    c.put(["k"], [1])
    entry_path(c, ["k"]).write_text("{not json")
    assert c.get(["k"]) is None
    c.put(["k"], [2])
    assert c.get(["k"]) == [2]


def test_version_and_key_mismatch_are_misses(tmp_path):
    c = DiskCache(tmp_path)
    c.put(["k"], [1])
    p = entry_path(c, ["k"])
    rec = json.loads(p.read_text())
    p.write_text(json.dumps({**rec, "version": CACHE_VERSION + "x"}))
    assert c.get(["k"]) is None
    p.write_text(json.dumps({**rec, "key": "0" * 64}))
    assert c.get(["k"]) is None


def test_default_directory(monkeypatch, tmp_path):
    monkeypatch.delenv("BRAIDCLASS_CACHE_DIR", raising=False)
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path))
    assert default_cache_dir() == tmp_path / "braidclass"
    monkeypatch.setenv("BRAIDCLASS_CACHE_DIR", str(tmp_path / "own"))
    assert default_cache_dir() == tmp_path / "own"
    assert DiskCache().root == tmp_path / "own"


def test_concurrent_threads(tmp_path):
    c = DiskCache(tmp_path)
    value = {"payload": list(range(2000))}

    def work(i):
        c.put(["shared"], value)
        got = c.get(["shared"])
        return got is None or got == value
    with ThreadPoolExecutor(8) as ex:
        assert all(ex.map(work, range(64)))
    assert c.get(["shared"]) == value
    assert not list(Path(tmp_path).rglob("*.tmp"))


def _writer(root, n):
    c = DiskCache(root)
    for i in range(n):
        c.put(["shared"], {"payload": list(range(3000))})
        got = c.get(["shared"])
        if got is not None and got != {"payload": list(range(3000))}:
            raise SystemExit(1)


def test_concurrent_processes(tmp_path):
    ctx = mp.get_context("spawn")
    procs = [ctx.Process(target=_writer, args=(str(tmp_path), 20)) for _ in range(4)]
    for p in procs:
        p.start()
    for p in procs:
        p.join(60)
    assert all(p.exitcode == 0 for p in procs)
    assert DiskCache(tmp_path).get(["shared"]) == {"payload": list(range(3000))}
