"""Network congestion game model, game-file loading and path enumeration.

A game is a directed network whose edges are the resources. Each edge has a
linear delay ``d(x) = a + b*x`` where ``x`` is the number of players on it.
Each player travels from an origin to a destination; their strategy space is
the set of simple directed paths between the two.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

DEFAULT_PATH_CAP = 64


class GameError(ValueError):
    """Raised for malformed game files and invalid games."""


@dataclass(frozen=True)
class Edge:
    id: int
    src: str
    dst: str
    a: float
    b: float

    def delay(self, load: int) -> float:
        return self.a + self.b * load


@dataclass(frozen=True)
class Player:
    id: int
    origin: str
    dest: str


@dataclass(frozen=True)
class Game:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    players: tuple[Player, ...]

    @property
    def n_resources(self) -> int:
        return len(self.edges)

    @property
    def n_players(self) -> int:
        return len(self.players)

    def edge_between(self, src: str, dst: str) -> Edge | None:
        for e in self.edges:
            if e.src == src and e.dst == dst:
                return e
        return None


@dataclass(frozen=True)
class Path:
    nodes: tuple[str, ...]
    edge_ids: tuple[int, ...]

    def __str__(self) -> str:
        return "-".join(self.nodes)


@dataclass(frozen=True)
class StrategyTable:
    """Per-player path lists plus the flat spin index of every (player, path)."""

    paths: tuple[tuple[Path, ...], ...]
    var_index: dict[tuple[int, int], int] = field(compare=False)

    @classmethod
    def from_paths(cls, paths) -> StrategyTable:
        paths = tuple(tuple(ps) for ps in paths)
        index = {}
        for i, ps in enumerate(paths):
            for j in range(len(ps)):
                index[(i, j)] = len(index)
        return cls(paths, index)

    @property
    def n_spins(self) -> int:
        return len(self.var_index)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(ps) for ps in self.paths)

    @property
    def max_paths(self) -> int:
        return max(self.counts)

    def register(self, player: int) -> list[int]:
        """Contiguous spin indices holding ``player``'s path choice."""
        return [self.var_index[(player, j)] for j in range(len(self.paths[player]))]

    def registers(self) -> list[list[int]]:
        return [self.register(i) for i in range(len(self.paths))]

    def variables(self):
        """Yield ``(spin index, player, path index, Path)`` in spin order."""
        for i, ps in enumerate(self.paths):
            for j, path in enumerate(ps):
                yield self.var_index[(i, j)], i, j, path


def _check_number(value, what: str, lineno: int | None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GameError(f"{what} must be a number" + _where(lineno))
    return float(value)


def _where(lineno: int | None) -> str:
    return f" (line {lineno})" if lineno else ""


def _line_of(text: str, needle: str, start: int = 0) -> tuple[int | None, int]:
    pos = text.find(needle, start)
    if pos < 0:
        return None, start
    return text.count("\n", 0, pos) + 1, pos + 1


def load_game(text: str) -> Game:
    """Parse and validate a JSON game file.

    Edge and player ids are assigned by position. Errors name the offending
    line where it can be located.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise GameError("game file must be a JSON object")
    for key in ("nodes", "edges", "players"):
        if key not in doc:
            raise GameError(f"missing required key '{key}'")
        if not isinstance(doc[key], list):
            raise GameError(f"'{key}' must be a list")

    nodes = doc["nodes"]
    seen = set()
    for name in nodes:
        if not isinstance(name, str) or not name:
            raise GameError(f"node names must be non-empty strings, got {name!r}")
        if name in seen:
            raise GameError(f"duplicate node '{name}'")
        seen.add(name)

    edges = []
    pairs = set()
    cursor = text.find('"edges"')
    for k, raw in enumerate(doc["edges"]):
        lineno, cursor = _line_of(text, "{", max(cursor, 0))
        if not isinstance(raw, dict):
            raise GameError(f"edge {k} must be an object" + _where(lineno))
        try:
            src, dst = raw["from"], raw["to"]
        except KeyError as exc:
            raise GameError(f"edge {k} missing '{exc.args[0]}'" + _where(lineno)) from None
        for end in (src, dst):
            if end not in seen:
                raise GameError(f"edge {k} has unknown endpoint '{end}'" + _where(lineno))
        if src == dst:
            raise GameError(f"edge {k} is a self-loop at '{src}'" + _where(lineno))
        if (src, dst) in pairs:
            raise GameError(f"duplicate edge {src}->{dst}" + _where(lineno))
        pairs.add((src, dst))
        a = _check_number(raw.get("a"), f"edge {k} intercept 'a'", lineno)
        b = _check_number(raw.get("b"), f"edge {k} slope 'b'", lineno)
        if b < 0:
            raise GameError(f"delay slope must be non-negative (edge {k} {src}->{dst} has b={b})" + _where(lineno))
        edges.append(Edge(k, src, dst, a, b))

    if not doc["players"]:
        raise GameError("at least one player required")
    players = []
    for k, raw in enumerate(doc["players"]):
        if not isinstance(raw, dict) or "origin" not in raw or "dest" not in raw:
            raise GameError(f"player {k} needs 'origin' and 'dest'")
        origin, dest = raw["origin"], raw["dest"]
        for end in (origin, dest):
            if end not in seen:
                raise GameError(f"player {k} refers to unknown node '{end}'")
        if origin == dest:
            raise GameError(f"player {k} has origin equal to destination '{origin}'")
        players.append(Player(k, origin, dest))

    return Game(tuple(nodes), tuple(edges), tuple(players))


def dump_game(game: Game) -> str:
    doc = {
        "nodes": list(game.nodes),
        "edges": [{"from": e.src, "to": e.dst, "a": e.a, "b": e.b} for e in game.edges],
        "players": [{"origin": p.origin, "dest": p.dest} for p in game.players],
    }
    return json.dumps(doc, indent=2) + "\n"


def simple_paths(game: Game, origin: str, dest: str, cap: int | None = None) -> list[Path]:
    """All simple directed paths from ``origin`` to ``dest`` by exhaustive DFS.

    Raises GameError when more than ``cap`` paths exist.
    """
    out_edges: dict[str, list[Edge]] = {v: [] for v in game.nodes}
    for e in game.edges:
        out_edges[e.src].append(e)

    found: list[Path] = []
    nodes = [origin]
    eids: list[int] = []
    on_path = {origin}

    def dfs(v: str) -> None:
        if v == dest:
            found.append(Path(tuple(nodes), tuple(eids)))
            if cap is not None and len(found) > cap:
                raise GameError(f"path count exceeds limit of {cap} for {origin}->{dest}")
            return
        for e in out_edges[v]:
            if e.dst in on_path:
                continue
            on_path.add(e.dst)
            nodes.append(e.dst)
            eids.append(e.id)
            dfs(e.dst)
            eids.pop()
            nodes.pop()
            on_path.discard(e.dst)

    dfs(origin)
    found.sort(key=lambda p: p.nodes)
    return found


def enumerate_paths(game: Game, cap: int = DEFAULT_PATH_CAP) -> StrategyTable:
    """Build every player's strategy space and the flat spin index map."""
    per_player = []
    for pl in game.players:
        try:
            paths = simple_paths(game, pl.origin, pl.dest, cap)
        except GameError as exc:
            raise GameError(f"player {pl.id}: {exc}") from None
        if not paths:
            raise GameError(f"no path exists for player {pl.id} ({pl.origin}->{pl.dest})")
        per_player.append(paths)
    return StrategyTable.from_paths(per_player)
