"""
Post logs to temporal hypergraphs.

A post array holds, for every (user, thread) cell, the timestamps of the
user's posts in that thread. Non-empty cells become incidences carrying the
cell interval [min, max]; threads become hyperedges carrying the hull of
their cell intervals and their class label.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import (
    Any,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .attributes import Category, Interval, hull
from .errors import EmptyData, InconsistentClass, InvalidParameter, MalformedRow
from .hypergraph import AttributedHypergraph, build_hypergraph

logger = logging.getLogger(__name__)

POST_COLUMNS = ("user_id", "thread_id", "class", "timestamp")

Row = Union[Mapping[str, Any], Sequence[Any]]


@dataclass(frozen=True)
class PostArray:
    """
    User x thread array of post timestamps.

    ``cells`` only holds non-empty cells; timestamps within a cell are sorted.
    """

    users: Tuple[str, ...]
    threads: Tuple[str, ...]
    cells: Mapping[Tuple[int, int], Tuple[float, ...]]
    thread_classes: Tuple[str, ...]

    def cell(self, user: int, thread: int) -> Tuple[float, ...]:
        return self.cells.get((user, thread), ())

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_threads(self) -> int:
        return len(self.threads)

    @property
    def n_posts(self) -> int:
        return sum(len(stamps) for stamps in self.cells.values())

    def rows(self) -> Iterator[Tuple[str, str, str, float]]:
        """Posts as (user, thread, class, timestamp), in cell order."""
        for (i, j), stamps in sorted(self.cells.items(), key=lambda item: (item[0][1], item[0][0])):
            for t in stamps:
                yield self.users[i], self.threads[j], self.thread_classes[j], t


def _fields(row: Row, line: int, path: Optional[str]) -> Tuple[str, str, str, str]:
    if isinstance(row, Mapping):
        values = [row.get(column) for column in POST_COLUMNS]
    else:
        values = list(row)
        if len(values) != len(POST_COLUMNS):
            raise MalformedRow(line, f"expected {len(POST_COLUMNS)} fields, got {len(values)}", path)
    for column, value in zip(POST_COLUMNS, values):
        if value is None or str(value).strip() == "":
            raise MalformedRow(line, f"missing {column}", path)
    user, thread, label, stamp = (str(v).strip() for v in values)
    return user, thread, label, stamp


def load_posts(
    rows: Iterable[Row],
    start: Optional[float] = None,
    end: Optional[float] = None,
    first_line: int = 1,
    path: Optional[str] = None,
) -> PostArray:
    """
    Accumulate post rows into a post array in a single pass.

    Args:
        rows: ``(user_id, thread_id, class, timestamp)`` tuples or mappings
            keyed by those column names.
        start: Drop posts before this time (closed window).
        end: Drop posts after this time (closed window).
        first_line: Line number of the first row, for error messages.
        path: Source file, for error messages.

    Raises:
        MalformedRow: On a missing field or unparseable timestamp.
        InconsistentClass: If a thread carries two class labels.
    """
    user_index: Dict[str, int] = {}
    thread_index: Dict[str, int] = {}
    labels: Dict[str, str] = {}
    cells: Dict[Tuple[int, int], List[float]] = {}
    skipped = 0

    for line, row in enumerate(rows, start=first_line):
        user, thread, label, stamp = _fields(row, line, path)
        try:
            t = float(stamp)
        except ValueError as e:
            raise MalformedRow(line, f"timestamp {stamp!r} is not a number", path) from e
        if not math.isfinite(t):
            raise MalformedRow(line, f"timestamp {stamp!r} is not finite", path)
        known = labels.setdefault(thread, label)
        if known != label:
            raise InconsistentClass(thread, known, label)
        if (start is not None and t < start) or (end is not None and t > end):
            skipped += 1
            continue
        i = user_index.setdefault(user, len(user_index))
        j = thread_index.setdefault(thread, len(thread_index))
        cells.setdefault((i, j), []).append(t)

    if skipped:
        logger.info("Skipped %d posts outside the time window", skipped)
    threads = tuple(thread_index)
    return PostArray(
        users=tuple(user_index),
        threads=threads,
        cells=MappingProxyType({key: tuple(sorted(v)) for key, v in cells.items()}),
        thread_classes=tuple(labels[thread] for thread in threads),
    )


def read_posts_csv(
    path: Union[str, Path], start: Optional[float] = None, end: Optional[float] = None
) -> PostArray:
    """
    Stream a posts CSV (``user_id,thread_id,class,timestamp`` header).

    Raises:
        EmptyData: If the file has no header.
        MalformedRow: On a bad header or row; line numbers are 1-based.
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        try:
            if reader.fieldnames is None:
                raise EmptyData(str(path))
            missing = [c for c in POST_COLUMNS if c not in reader.fieldnames]
            if missing:
                raise MalformedRow(1, f"header lacks {', '.join(missing)}", str(path))
            return load_posts(reader, start=start, end=end, first_line=2, path=str(path))
        except (UnicodeDecodeError, csv.Error) as e:
            raise unreadable_row(e, reader.line_num, path) from e


def unreadable_row(error: Exception, lines_read: int, path: Union[str, Path]) -> MalformedRow:
    """
    Turn a decoding or CSV parser failure into a ``MalformedRow``.

    A decode error surfaces before its line is counted; a parser error after.
    """
    if isinstance(error, UnicodeDecodeError):
        return MalformedRow(lines_read + 1, "not valid UTF-8 text", str(path))
    return MalformedRow(max(lines_read, 1), str(error), str(path))


def write_posts_csv(posts: PostArray, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(POST_COLUMNS)
        for user, thread, label, t in posts.rows():
            writer.writerow([user, thread, label, repr(t)])


def cell_intervals(posts: PostArray) -> Dict[Tuple[int, int], Interval]:
    """Closed interval [min, max] of every non-empty cell."""
    return {key: Interval(stamps[0], stamps[-1]) for key, stamps in posts.cells.items()}


def row_hulls(posts: PostArray) -> Dict[int, Interval]:
    """Activity interval of each user: the hull of the user's cell intervals."""
    by_user: Dict[int, List[Interval]] = {}
    for (i, _), interval in cell_intervals(posts).items():
        by_user.setdefault(i, []).append(interval)
    return {i: hull(intervals) for i, intervals in by_user.items()}


def column_hulls(posts: PostArray) -> Dict[int, Interval]:
    """Activity interval of each thread: the hull of the thread's cell intervals."""
    by_thread: Dict[int, List[Interval]] = {}
    for (_, j), interval in cell_intervals(posts).items():
        by_thread.setdefault(j, []).append(interval)
    return {j: hull(intervals) for j, intervals in by_thread.items()}


def hypergraph_from_posts(
    posts: PostArray, time_attr: str = "time", class_attr: str = "class"
) -> AttributedHypergraph:
    """
    Users become vertices, threads become hyperedges.

    Incidences carry their cell interval under ``time_attr``; hyperedges
    carry the thread hull under ``time_attr`` and the thread label under
    ``class_attr``. Users and threads without posts are dropped.

    Raises:
        EmptyData: If the array has no posts.
    """
    if not posts.cells:
        raise EmptyData("post array")
    intervals = cell_intervals(posts)
    columns = column_hulls(posts)
    active_users = sorted({i for i, _ in posts.cells})
    active_threads = sorted(columns)

    members: Dict[int, List[str]] = {j: [] for j in active_threads}
    for i, j in sorted(posts.cells):
        members[j].append(posts.users[i])

    hypergraph = build_hypergraph(
        vertices=[posts.users[i] for i in active_users],
        edges=[members[j] for j in active_threads],
        edge_attrs={
            posts.threads[j]: {
                time_attr: columns[j],
                class_attr: Category(posts.thread_classes[j]),
            }
            for j in active_threads
        },
        incidence_attrs={
            (posts.users[i], posts.threads[j]): {time_attr: interval}
            for (i, j), interval in intervals.items()
        },
        edge_names=[posts.threads[j] for j in active_threads],
    )
    logger.info(
        "Post array: %d users, %d threads, %d posts -> %d incidences",
        posts.n_users,
        posts.n_threads,
        posts.n_posts,
        hypergraph.n_incidences,
    )
    return hypergraph


def synth_migration(
    n_users: int,
    classes: Tuple[str, str] = ("A", "B"),
    migration_time: float = 50.0,
    seed: int = 0,
    threads_per_class: int = 20,
    horizon: float = 100.0,
    migrate_fraction: float = 0.5,
) -> PostArray:
    """
    Generate a seeded post log where authors move from one class to another.

    Class-A threads are active strictly before ``migration_time`` and
    class-B threads at or after it, inside ``[0, horizon]``. Every user posts
    to some A threads; a ``migrate_fraction`` of users (always including the
    first) also posts to B threads afterwards. When ``migration_time`` lies
    beyond ``horizon`` every thread is class A.

    Raises:
        InvalidParameter: On fewer than two users or a bad count or fraction.
    """
    if n_users < 2:
        raise InvalidParameter("n_users", n_users, "must be at least 2")
    if threads_per_class < 1:
        raise InvalidParameter("threads_per_class", threads_per_class, "must be positive")
    if not 0.0 <= migrate_fraction <= 1.0:
        raise InvalidParameter("migrate_fraction", migrate_fraction, "must lie in [0, 1]")
    if horizon <= 0:
        raise InvalidParameter("horizon", horizon, "must be positive")
    rng = np.random.default_rng(seed)
    class_a, class_b = classes

    spans = []
    if migration_time > 0:
        spans.append((class_a, 0.0, min(migration_time, horizon), np.floor))
    if migration_time < horizon:
        spans.append((class_b, max(migration_time, 0.0), horizon, np.ceil))

    # (name, label, window start, window end, rounding)
    windows = []
    for label, lo, hi, rounding in spans:
        length = hi - lo
        for k in range(threads_per_class):
            begin = lo + rng.uniform(0.0, 0.8 * length)
            finish = min(begin + rng.uniform(0.05, 0.2) * length, hi)
            windows.append((f"{label}-{k:03d}", label, begin, finish, rounding))

    by_label: Dict[str, List[int]] = {}
    for index, window in enumerate(windows):
        by_label.setdefault(window[1], []).append(index)

    def posts_in(user: str, indices: List[int]) -> List[Tuple[str, str, str, float]]:
        count = int(rng.integers(1, 4))
        picked = rng.choice(len(indices), size=min(count, len(indices)), replace=False)
        out = []
        for p in sorted(picked):
            name, label, begin, finish, rounding = windows[indices[p]]
            for t in rng.uniform(begin, finish, size=int(rng.integers(1, 4))):
                out.append((user, name, label, float(rounding(t * 1000.0) / 1000.0)))
        return out

    rows: List[Tuple[str, str, str, float]] = []
    first_label = spans[0][0]
    for u in range(n_users):
        user = f"u{u:04d}"
        rows.extend(posts_in(user, by_label[first_label]))
        migrates = u == 0 or rng.random() < migrate_fraction
        if len(spans) == 2 and migrates:
            rows.extend(posts_in(user, by_label[class_b]))
    return load_posts(rows)
