"""
Система неперетинних множин для розбиття на орбіти
"""

from typing import Callable, Dict, Hashable, Iterable, List, Set


class UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        del self.rank[y]

    def reps(self) -> Set:
        return set(self.rank)

    def __len__(self) -> int:
        return len(self.rank)

    def groups(self) -> Dict[Hashable, List]:
        result: Dict[Hashable, List] = {rep: [] for rep in self.rank}
        for x in self.parent:
            result[self.find(x)].append(x)
        return result


def find_orbits(gens: Iterable, space: Iterable[Hashable], action: Callable) -> List[List]:
    """Орбіти дії, заданої твірними; кожна орбіта відсортована, орбіти - за найменшим елементом"""
    space = list(space)
    uf = UnionFind(space)
    for g in gens:
        for x in space:
            uf.union(x, action(g, x))
    return sorted((sorted(orbit) for orbit in uf.groups().values()), key=lambda o: o[0])
