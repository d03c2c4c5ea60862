import io
import logging
import sys
import threading
from unittest.mock import patch

import pytest

from hyx.core import Document, HashAlgorithm, compute_id
from hyx.main import main
from hyx.net import make_server
from hyx.store import STORE_ENV_VAR, Normalization, ObjectStore
from hyx.utils.logger import set_level

from conftest import C1_FIXED, C1_SHA1, C2, D1, D1_SHA1, D3, D3_SHA1, E1

HELLO_ALICE_SHA1 = compute_id(Document(b"Hello, Alice!"), HashAlgorithm.SHA1)
C1_FIXED_SHA1 = compute_id(Document(C1_FIXED), HashAlgorithm.SHA1).hex


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "store"


@pytest.fixture
def hyx(store_path, capsysbinary, monkeypatch):
    """Runs the CLI against a SHA-1 store; returns (exit code, stdout bytes)."""

    def run(*args, stdin=b""):
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin)))
        code = main(["--store", str(store_path), "--algo", "sha1", *args])
        out, _ = capsysbinary.readouterr()
        return code, out

    return run


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, data in {
        "d1.txt": D1,
        "d3.txt": D3,
        "c1.loc": C1_FIXED,
        "c2.loc": C2,
        "e1.edl": E1.replace(C1_SHA1, C1_FIXED_SHA1).encode("ascii"),
    }.items():
        paths[name] = tmp_path / name
        paths[name].write_bytes(data)
    return paths


@pytest.fixture
def example(hyx, files):
    for name in ("d1.txt", "d3.txt", "c1.loc", "c2.loc"):
        assert hyx("add", str(files[name]))[0] == 0
    return files


def test_add_prints_example_id(hyx, files):
    assert hyx("add", str(files["d1.txt"])) == (0, f"sha1:{D1_SHA1}\n".encode())


def test_add_then_cat_round_trips_binary(hyx):
    data = bytes(range(256)) + b"\x00\x00tail"

    code, out = hyx("add", "-", stdin=data)
    assert code == 0

    assert hyx("cat", out.decode().strip()) == (0, data)


def test_cat_unknown_id(hyx, hyx_caplog):
    code, out = hyx("cat", "sha1:" + "0" * 40)

    assert code == 1
    assert out == b""
    assert "not found" in hyx_caplog.text


def test_id_does_not_store(hyx, files, store_path):
    assert hyx("id", str(files["d3.txt"])) == (0, f"sha1:{D3_SHA1}\n".encode())
    assert not store_path.exists()


def test_id_follows_store_normalization(hyx, store_path):
    ObjectStore.open(
        store_path, create=True, algorithm=HashAlgorithm.SHA1, normalization=Normalization.NEWLINE_LF
    )

    _, by_id = hyx("id", "-", stdin=b"a\r\nb")
    _, by_add = hyx("add", "-", stdin=b"a\r\nb")

    expected = compute_id(Document(b"a\nb"), HashAlgorithm.SHA1)
    assert by_id == by_add == f"{expected}\n".encode()


def test_add_with_format_tag(hyx, store_path):
    _, out = hyx("add", "--format", "text/plain;charset=utf-8", "-", stdin=b"tagged")

    doc_id = compute_id(Document(b"tagged"), HashAlgorithm.SHA1)
    assert out == f"{doc_id}\n".encode()
    assert ObjectStore.open(store_path).get(doc_id).format_tag == "text/plain;charset=utf-8"


def test_select(hyx, example):
    assert hyx("select", f"sha1:{D1_SHA1}", "char=11,16") == (0, b"Alice")


def test_select_unselectable(hyx, example):
    assert hyx("select", f"sha1:{D1_SHA1}", "char=11,99")[0] == 1


def test_select_oversized_position(hyx, example, hyx_caplog):
    assert hyx("select", f"sha1:{D1_SHA1}", "char=" + "1" * 5000) == (1, b"")
    assert "Invalid positions" in hyx_caplog.text


def test_assemble_example(hyx, example):
    assert hyx("assemble", str(example["e1.edl"])) == (0, b"Hello, Alice!")


def test_assemble_put_matches_pipeline(hyx, example):
    code, assembled = hyx("assemble", str(example["e1.edl"]))
    assert code == 0
    _, piped = hyx("add", "-", stdin=assembled)
    _, put = hyx("assemble", "--put", str(example["e1.edl"]))

    assert piped == put == f"{HELLO_ALICE_SHA1}\n".encode()


def test_assemble_out(hyx, example, tmp_path):
    out_file = tmp_path / "d4.txt"

    assert hyx("assemble", "--out", str(out_file), str(example["e1.edl"])) == (0, b"")
    assert out_file.read_bytes() == b"Hello, Alice!"


def test_assemble_stored_edit_list(hyx, example):
    _, edl_id = hyx("add", str(example["e1.edl"]))

    assert hyx("assemble", edl_id.decode().strip()) == (0, b"Hello, Alice!")


def test_assemble_from_stdin(hyx, example):
    assert hyx("assemble", "-", stdin=example["e1.edl"].read_bytes()) == (0, b"Hello, Alice!")


def test_assemble_missing_input(hyx, tmp_path, hyx_caplog):
    code, out = hyx("assemble", str(tmp_path / "missing.edl"))

    assert (code, out) == (1, b"")
    assert "neither a file nor a document id" in hyx_caplog.text


def test_assemble_syntax_error(hyx, tmp_path, hyx_caplog):
    bad = tmp_path / "bad.edl"
    bad.write_text('take "a"\nfrobnicate\n')

    assert hyx("assemble", str(bad)) == (1, b"")
    assert "line 2" in hyx_caplog.text


def test_links(hyx, example):
    code, out = hyx("links", str(example["e1.edl"]))

    assert code == 0
    assert out.decode().splitlines() == [
        f"versioning char=7 sha1:{D3_SHA1}",
        f"transclusion char=11,16 sha1:{D1_SHA1}",
    ]


def test_links_put(hyx, example, store_path):
    code, out = hyx("links", "--put", str(example["e1.edl"]))

    assert code == 0
    assert all(line.endswith(f" -> {HELLO_ALICE_SHA1}") for line in out.decode().splitlines())
    assert HELLO_ALICE_SHA1 in ObjectStore.open(store_path)


def test_verify_ok(hyx, example):
    code, out = hyx("verify", str(example["e1.edl"]))

    assert code == 0
    lines = out.decode().splitlines()
    assert len(lines) == 6
    assert all(line.startswith("ok ") for line in lines)


def test_verify_failure(hyx, files):
    hyx("add", str(files["d3.txt"]))
    hyx("add", str(files["c2.loc"]))
    hyx("add", str(files["c1.loc"]))

    code, out = hyx("verify", str(files["e1.edl"]))

    assert code == 1
    assert f"FAIL op 1 from sha1:{D1_SHA1} unresolved".encode() in out


def test_read_commands_do_not_create_store(hyx, store_path):
    assert hyx("cat", "sha1:" + "0" * 40)[0] == 1
    assert not store_path.exists()


def test_store_from_environment(tmp_path, monkeypatch, capsysbinary):
    env_store = tmp_path / "env-store"
    monkeypatch.setenv(STORE_ENV_VAR, str(env_store))
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(D3)))

    assert main(["add", "-"]) == 0

    assert (env_store / "config").read_text().startswith("algorithm=sha256")
    assert len(list(ObjectStore.open(env_store).iter_ids())) == 1


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["--algo", "md5", "cat", "x"], ["select", "only-id"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)

    assert excinfo.value.code == 2


def test_serve_routes_bind_address(store_path):
    with patch("hyx.main.run_serve") as run_serve:
        assert main(["--store", str(store_path), "serve", "--bind", "127.0.0.1:9999"]) == 0

    store, bind = run_serve.call_args.args
    assert bind == "127.0.0.1:9999"
    assert store.root == store_path


def test_fetch(tmp_path, hyx, store_path):
    remote = ObjectStore.open(tmp_path / "remote", create=True, algorithm=HashAlgorithm.SHA1)
    doc_id = remote.put(Document(D1))
    server = make_server(remote, "127.0.0.1:0")
    threading.Thread(target=server.serve_forever, daemon=True).start()
    try:
        assert hyx("fetch", server.url, str(doc_id)) == (0, f"{doc_id}\n".encode())
    finally:
        server.shutdown()
        server.server_close()

    assert hyx("cat", str(doc_id)) == (0, D1)


def test_verbose_flag_enables_debug(hyx, files):
    try:
        hyx("-v", "add", str(files["d1.txt"]))
        assert logging.getLogger("hyx.store").level == logging.DEBUG
    finally:
        set_level("INFO")
