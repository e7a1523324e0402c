"""Input coercion shared by the estimator facade and the CLI."""

from __future__ import annotations

from typing import Mapping, Union

from .dsl import Language, load_spec
from .ktypes import TypeTable
from .solvers.model import Instance

LanguageLike = Union[str, Language, Mapping[str, TypeTable]]
InstanceLike = Union[Instance, Mapping]


def check_language(language: LanguageLike) -> dict[str, TypeTable]:
    """Spec text, a loaded Language, or a name-to-table mapping, as a plain dict of tables."""
    if isinstance(language, str):
        language = load_spec(language)
    if isinstance(language, Language):
        return dict(language.tables)
    if isinstance(language, Mapping):
        out = {}
        for name, table in language.items():
            if not isinstance(table, TypeTable):
                raise TypeError(f"relation {name!r} maps to {type(table).__name__}, expected TypeTable")
            out[str(name)] = table
        return out
    raise TypeError(f"cannot interpret {type(language).__name__} as a language")


def check_instance(instance: InstanceLike, tables: Mapping[str, TypeTable]) -> Instance:
    """An Instance (or its JSON document) checked against the language's names and arities."""
    if isinstance(instance, Mapping):
        instance = Instance.from_json(instance)
    if not isinstance(instance, Instance):
        raise TypeError(f"cannot interpret {type(instance).__name__} as an instance")
    instance.check(tables)
    return instance
