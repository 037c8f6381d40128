# tests/test_messages.py
import json

import errors
from services.messages import MessageCatalog


def write_catalog(tmp_path, lang, messages):
    (tmp_path / f"messages_{lang}.json").write_text(json.dumps(messages), encoding="utf-8")


def test_lookup_and_fallback(tmp_path):
    write_catalog(tmp_path, "en", {"hello": "hi {name}", "bye": "bye"})
    write_catalog(tmp_path, "de", {"hello": "hallo {name}"})
    catalog = MessageCatalog(str(tmp_path), "de")
    assert catalog.get("hello", name="q") == "hallo q"
    assert catalog.get("bye") == "bye"
    assert catalog.get("nope") == "MISSING_MESSAGE: de.nope"


def test_missing_format_argument_returns_template(tmp_path):
    write_catalog(tmp_path, "en", {"hello": "hi {name}"})
    assert MessageCatalog(str(tmp_path), "en").get("hello") == "hi {name}"


def test_broken_and_missing_directories(tmp_path):
    (tmp_path / "messages_en.json").write_text("{", encoding="utf-8")
    assert MessageCatalog(str(tmp_path), "en").messages == {}
    assert MessageCatalog(str(tmp_path / "absent"), "en").get("x") == "MISSING_MESSAGE: en.x"


def subclasses(cls):
    for sub in cls.__subclasses__():
        yield sub
        yield from subclasses(sub)


def test_every_error_has_a_message():
    catalog = MessageCatalog()
    keys = {errors.QctlError.message_key} | {cls.message_key for cls in subclasses(errors.QctlError)}
    for key in keys:
        assert not catalog.get(key, detail="x", where="", line=1, column=1, expected="-", iterations=1,
                               residual="0").startswith("MISSING_MESSAGE")
