"""Shared helpers for the JSON model formats."""

from ardt.dataset import FeatureMeta


def require(mapping, key, context):
    if key not in mapping:
        raise ValueError(f"malformed model file: missing field {key!r} in {context}")
    return mapping[key]


def meta_to_dict(feature_meta):
    return [
        {"name": fm.name, "kind": fm.kind,
         "categories": list(fm.categories) if fm.categories else None}
        for fm in feature_meta
    ]


def meta_from_dict(items):
    return tuple(
        FeatureMeta(
            name=require(fm, "name", "feature_meta"),
            kind=require(fm, "kind", "feature_meta"),
            categories=tuple(fm["categories"]) if fm.get("categories") else None,
        )
        for fm in items
    )
