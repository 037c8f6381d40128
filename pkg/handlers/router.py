# handlers/router.py
"""Subcommand routers: handlers register on a router, the dispatcher mounts routers on argparse."""
import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple

from config import RunConfig
from services.messages import MessageCatalog

Handler = Callable[[argparse.Namespace, "CommandContext"], int]
Argument = Tuple[Tuple[str, ...], Dict[str, Any]]

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def arg(*names: str, **kwargs) -> Argument:
    return names, kwargs


@dataclass
class CommandContext:
    catalog: MessageCatalog
    config: RunConfig
    out: TextIO = field(default_factory=lambda: sys.stdout)
    err: TextIO = field(default_factory=lambda: sys.stderr)

    def say(self, key: str, **kwargs) -> None:
        print(self.catalog.get(key, **kwargs), file=self.out)

    def complain(self, key: str, **kwargs) -> None:
        print(self.catalog.get(key, **kwargs), file=self.err)

    def write(self, text: str) -> None:
        print(text, file=self.out)

    def emit_json(self, payload: Any) -> None:
        print(json.dumps(payload, indent=2, sort_keys=True), file=self.out)


@dataclass
class Command:
    name: str
    handler: Handler
    help_key: str
    arguments: List[Argument]


class CommandRouter:
    def __init__(self, name: str):
        self.name = name
        self.commands: List[Command] = []

    def command(self, name: str, help_key: str, *arguments: Argument) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            self.commands.append(Command(name, handler, help_key, list(arguments)))
            return handler
        return register


class Dispatcher:
    def __init__(self, catalog: MessageCatalog):
        self.catalog = catalog
        self.routers: List[CommandRouter] = []

    def include_router(self, router: CommandRouter) -> None:
        self.routers.append(router)

    def build_parser(self, prog: str, common: Optional[argparse.ArgumentParser] = None) -> argparse.ArgumentParser:
        parents = [common] if common is not None else []
        parser = argparse.ArgumentParser(prog=prog, description=self.catalog.get("cli_description"))
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
        subparsers.required = True
        for router in self.routers:
            for cmd in router.commands:
                sub = subparsers.add_parser(cmd.name, help=self.catalog.get(cmd.help_key), parents=parents)
                for names, kwargs in cmd.arguments:
                    sub.add_argument(*names, **kwargs)
                sub.set_defaults(handler=cmd.handler)
        return parser
