"""Complete histories and prefixes as per-player piecewise-constant maps.

A complete history assigns every time an action tuple; here each player's
map is a finite list of (interval, action) pieces that partitions the
whole domain.  Prefixes cover exactly the times strictly below a cut
(optionally including the cut itself, which the dense solver uses for
right-limit re-queries after instantaneous pieces).
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    CoverageGapError,
    CoverageOverlapError,
    CutMismatchError,
    PointNotInDomainError,
)
from . import timeorder as to
from .timeorder import Interval, TimeDomain, TimePoint

Piece = tuple[Interval, str]


def canonical_pieces(
    domain: TimeDomain,
    pieces: Iterable[Piece],
    cover: Optional[Interval],
) -> tuple[Piece, ...]:
    """Sort, validate exact coverage of `cover`, and merge equal-action runs.

    Raises CoverageGapError / CoverageOverlapError when the pieces do not
    tile `cover` exactly.  `cover=None` means the empty set (only an empty
    piece list is accepted).
    """
    items: list[Piece] = []
    for iv, action in pieces:
        norm = to.make_interval(domain, iv.lo, iv.hi, iv.lo_closed, iv.hi_closed)
        if norm is not None:
            items.append((norm, action))
    items.sort(key=lambda p: to._sort_key(p[0]))
    if cover is None:
        if items:
            raise CoverageOverlapError("pieces supplied for an empty time set")
        return ()
    if not items:
        raise CoverageGapError("no pieces for a nonempty time set")
    first = items[0][0]
    if first.lo != cover.lo or first.lo_closed != cover.lo_closed:
        raise CoverageGapError(f"coverage starts at {first.lo}, expected {cover.lo}")
    for (a, _), (b, _) in zip(items, items[1:]):
        if to.abuts(domain, a, b):
            continue
        if to.intersect(a, b) is not None:
            raise CoverageOverlapError(f"pieces {a} and {b} overlap")
        raise CoverageGapError(f"gap between {a} and {b}")
    last = items[-1][0]
    if last.hi != cover.hi or last.hi_closed != cover.hi_closed:
        raise CoverageGapError(f"coverage ends at {last.hi}, expected {cover.hi}")
    merged: list[Piece] = [items[0]]
    for iv, action in items[1:]:
        prev_iv, prev_action = merged[-1]
        if action == prev_action:
            merged[-1] = (to._try_union(domain, prev_iv, iv), action)
        else:
            merged.append((iv, action))
    return tuple(merged)


def eval_pieces(pieces: Sequence[Piece], t: TimePoint) -> str:
    for iv, action in pieces:
        if iv.contains(t):
            return action
    raise PointNotInDomainError(f"time {t} not covered by pieces")


def restrict_pieces(
    domain: TimeDomain, pieces: Sequence[Piece], window: Optional[Interval]
) -> tuple[Piece, ...]:
    """Pieces intersected with a window; empty window yields ()."""
    if window is None:
        return ()
    out = []
    for iv, action in pieces:
        cut = to.intersect(iv, window)
        if cut is not None:
            out.append((cut, action))
    return tuple(out)


@dataclass(frozen=True)
class PiecewiseHistory:
    """A complete history h: every player's pieces partition the domain."""

    domain: TimeDomain
    players: tuple[str, ...]
    per_player: tuple[tuple[Piece, ...], ...]

    @staticmethod
    def build(
        domain: TimeDomain,
        players: Sequence[str],
        pieces_by_player: Mapping[str, Iterable[Piece]],
    ) -> "PiecewiseHistory":
        cover = to.full_interval(domain)
        per = tuple(
            canonical_pieces(domain, pieces_by_player[p], cover) for p in players
        )
        return PiecewiseHistory(domain, tuple(players), per)

    def pieces_for(self, player: str) -> tuple[Piece, ...]:
        return self.per_player[self.players.index(player)]

    def eval(self, t: TimePoint) -> tuple[str, ...]:
        """The action tuple at time t."""
        to.require_point(self.domain, t)
        return tuple(eval_pieces(pp, t) for pp in self.per_player)

    def eval_player(self, player: str, t: TimePoint) -> str:
        to.require_point(self.domain, t)
        return eval_pieces(self.pieces_for(player), t)

    def change_times(self) -> list[TimePoint]:
        """All piece boundary coordinates, for exact spot checks."""
        pts = set()
        for pp in self.per_player:
            for iv, _ in pp:
                pts.add(iv.lo)
                pts.add(iv.hi)
        return sorted(pts)


@dataclass(frozen=True)
class HistoryPrefix:
    """The restriction of a history to T_<cut (or T_<=cut when cut_included)."""

    domain: TimeDomain
    cut: TimePoint
    players: tuple[str, ...]
    per_player: tuple[tuple[Piece, ...], ...]
    cut_included: bool = False

    @property
    def is_empty(self) -> bool:
        return all(not pp for pp in self.per_player)

    def window(self) -> Optional[Interval]:
        if self.cut_included:
            return to.at_or_before(self.domain, self.cut)
        return to.before(self.domain, self.cut)

    def pieces_for(self, player: str) -> tuple[Piece, ...]:
        return self.per_player[self.players.index(player)]

    def eval(self, t: TimePoint) -> tuple[str, ...]:
        w = self.window()
        if w is None or not w.contains(t):
            raise PointNotInDomainError(f"time {t} is not below the cut {self.cut}")
        return tuple(eval_pieces(pp, t) for pp in self.per_player)

    def eval_player(self, player: str, t: TimePoint) -> str:
        return self.eval(t)[self.players.index(player)]


def empty_prefix(domain: TimeDomain, players: Sequence[str]) -> HistoryPrefix:
    return HistoryPrefix(domain, to.domain_min(domain), tuple(players), tuple(() for _ in players))


def prefix(h: PiecewiseHistory, t: TimePoint, include: bool = False) -> HistoryPrefix:
    """h restricted to times strictly below t (or <= t when include=True)."""
    to.require_point(h.domain, t)
    window = to.at_or_before(h.domain, t) if include else to.before(h.domain, t)
    per = tuple(restrict_pieces(h.domain, pp, window) for pp in h.per_player)
    return HistoryPrefix(h.domain, t, h.players, per, include)


def prefix_equal(p: HistoryPrefix, q: HistoryPrefix) -> bool:
    """True iff the two prefixes agree at every point of their window."""
    if p.domain != q.domain or p.cut != q.cut or p.cut_included != q.cut_included:
        raise CutMismatchError(
            f"cannot compare prefixes at cuts {p.cut!r}/{q.cut!r} "
            f"over {p.domain!r}/{q.domain!r}"
        )
    return p.players == q.players and p.per_player == q.per_player


def splice(p: HistoryPrefix, tails: Mapping[str, Iterable[Piece]]) -> PiecewiseHistory:
    """Complete history agreeing with p below the cut and with the tails above.

    Each tail must cover exactly the times at or above the cut (strictly
    above when the prefix includes its cut).
    """
    combined = {
        player: list(p.pieces_for(player)) + list(tails[player]) for player in p.players
    }
    return PiecewiseHistory.build(p.domain, p.players, combined)


def history_to_json(h: PiecewiseHistory) -> dict:
    return {
        player: [
            {**iv.to_json(), "action": action} for iv, action in h.pieces_for(player)
        ]
        for player in h.players
    }


def history_from_json(domain: TimeDomain, players: Sequence[str], obj: Mapping) -> PiecewiseHistory:
    pieces = {
        player: [
            (to.interval_from_json(entry, domain), str(entry["action"]))
            for entry in obj[player]
        ]
        for player in players
    }
    return PiecewiseHistory.build(domain, players, pieces)


def history_to_csv(h: PiecewiseHistory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["player", "lo", "hi", "lo_closed", "hi_closed", "action"])
    for player in h.players:
        for iv, action in h.pieces_for(player):
            writer.writerow(
                [player, to.format_point(iv.lo), to.format_point(iv.hi),
                 iv.lo_closed, iv.hi_closed, action]
            )
    return buf.getvalue()
