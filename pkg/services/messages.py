# services/messages.py
import json
import logging
import os
from typing import Dict

from config import LOCALES_DIR, UI_LANG

logger = logging.getLogger(__name__)


class MessageCatalog:
    def __init__(self, locales_dir: str = LOCALES_DIR, lang: str = UI_LANG):
        self.locales_dir = locales_dir
        self.lang = lang
        self.messages: Dict[str, Dict[str, str]] = {}
        self._load_messages()

    def _load_messages(self):
        if not os.path.isdir(self.locales_dir):
            logger.error(f"Locales directory not found: {os.path.abspath(self.locales_dir)}")
            return

        for name in sorted(os.listdir(self.locales_dir)):
            if name.startswith("messages_") and name.endswith(".json"):
                lang_code = name[len("messages_"):-len(".json")]
                file_path = os.path.join(self.locales_dir, name)
                try:
                    with open(file_path, "r", encoding="utf-8") as f:
                        self.messages[lang_code] = json.load(f)
                    logger.debug(f"Loaded message file {file_path} for lang '{lang_code}'")
                except (OSError, ValueError) as e:
                    logger.error(f"Error loading message file {file_path}: {e}")

        if not self.messages:
            logger.warning("No message files were loaded. Check the locales directory and file naming.")

    def get(self, key: str, **kwargs) -> str:
        lang = self.lang
        if lang in self.messages and key in self.messages[lang]:
            template = self.messages[lang][key]
        elif "en" in self.messages and key in self.messages["en"]:
            if lang != "en":
                logger.warning(f"Key '{key}' not found for lang '{lang}'. Falling back to 'en'.")
            template = self.messages["en"][key]
        else:
            logger.error(f"Key '{key}' not found for lang '{lang}' and no 'en' fallback available.")
            return f"MISSING_MESSAGE: {lang}.{key}"

        try:
            return template.format(**kwargs)
        except (KeyError, IndexError) as e:
            logger.error(f"Missing format key {e} for message {lang}.{key} with template '{template}' and args {kwargs}")
            return template
