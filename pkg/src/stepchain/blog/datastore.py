"""In-memory datastore for the demo blog.

Five tables with integer ids and referential checks on every write: a
record may only point at ids that already exist in the referenced table.
"""
from __future__ import annotations


class StoreError(Exception):
    pass


class MissingRecord(StoreError):
    """No record with the given id in the table."""


class BrokenReference(StoreError):
    """A record points at an id missing from the referenced table."""


# table -> (allowed fields, {field: referenced table})
SCHEMA = {
    "Users": (("email", "name"), {}),
    "Posts": (("author", "body", "bodyImages", "comments"),
              {"author": "Users", "bodyImages": "Images", "comments": "Comments"}),
    "Comments": (("author", "body", "bodyImages"),
                 {"author": "Users", "bodyImages": "Images"}),
    "Messages": (("author", "body", "bodyImages"),
                 {"author": "Users", "bodyImages": "Images"}),
    "Images": (("url",), {}),
}


class BlogStore:
    def __init__(self):
        self._tables: dict[str, dict[int, dict]] = {t: {} for t in SCHEMA}
        self._next_id = {t: 1 for t in SCHEMA}

    def create(self, table: str, record: dict, record_id: int | None = None) -> dict:
        """Insert a record; returns the stored copy including its id."""
        fields, _ = self._schema(table)
        unknown = set(record) - set(fields)
        if unknown:
            raise ValueError(f"unknown fields for {table}: {sorted(unknown)}")
        self._check_refs(table, record)
        rows = self._tables[table]
        if record_id is None:
            record_id = self._next_id[table]
        elif record_id in rows:
            raise ValueError(f"{table} id {record_id} already exists")
        self._next_id[table] = max(self._next_id[table], record_id + 1)
        stored = {"id": record_id, **record}
        rows[record_id] = stored
        return dict(stored)

    def read(self, table: str, record_id) -> dict:
        rows = self._tables[self._require_table(table)]
        if record_id not in rows:
            raise MissingRecord(f"{table} has no record {record_id!r}")
        return dict(rows[record_id])

    def update(self, table: str, record_id, fields: dict) -> dict:
        allowed, _ = self._schema(table)
        unknown = set(fields) - set(allowed)
        if unknown:
            raise ValueError(f"unknown fields for {table}: {sorted(unknown)}")
        rows = self._tables[table]
        if record_id not in rows:
            raise MissingRecord(f"{table} has no record {record_id!r}")
        self._check_refs(table, fields)
        rows[record_id].update(fields)
        return dict(rows[record_id])

    def delete(self, table: str, record_id) -> dict:
        rows = self._tables[self._require_table(table)]
        if record_id not in rows:
            raise MissingRecord(f"{table} has no record {record_id!r}")
        return rows.pop(record_id)

    def _check_refs(self, table: str, fields: dict) -> None:
        _, refs = self._schema(table)
        for field, target in refs.items():
            if field not in fields:
                continue
            value = fields[field]
            ids = value if isinstance(value, (list, tuple)) else [value]
            for ref_id in ids:
                if ref_id not in self._tables[target]:
                    raise BrokenReference(
                        f"{table}.{field} points at missing {target} id "
                        f"{ref_id!r}")

    def _schema(self, table: str):
        return SCHEMA[self._require_table(table)]

    @staticmethod
    def _require_table(table: str) -> str:
        if table not in SCHEMA:
            raise ValueError(f"unknown table: {table!r}")
        return table
