"""
Literal Decoding Utilities
Parses group literals, elements, connection sets and permutations from CLI / file text
"""

import re
from math import gcd
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from core.errors import ParseError, RegrepError

_SQFREE = re.compile(r'^sqfree:(.*)$')
_CYCLIC = re.compile(r'^C(\d+)$')
_DIHEDRAL = re.compile(r'^D(\d+)$')
_FACTOR = re.compile(r'([zyx])(?:\^(-?\d+))?$')
_TRIPLE = re.compile(r'^\(?\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)?$')


class LiteralDecoder:
    """Decode text literals into group objects and element indices"""

    ALIASES = {
        'D6': (1, 3, 2, 2),
        'D10': (1, 5, 2, 4),
        'D30': (1, 15, 2, 14),
        'C21': (21, 1, 1, 1),
        'F21': (1, 7, 3, 2),
    }

    @staticmethod
    def parse_group(text: str):
        """
        Parse a group literal

        Accepted forms: "sqfree:t=5,n=7,m=3,j=2", aliases (D6, D10, D30, C21, F21),
        "C<k>", "D<2k>" with k odd, and "C<q>x<literal>" for a central cyclic factor.

        Args:
            text: Literal

        Returns:
            Canonical SquarefreeGroup

        Raises:
            ParseError
        """
        from core.squarefree_group import make_group

        params = LiteralDecoder.group_params(text)
        try:
            return make_group(*params)
        except ParseError:
            raise
        except RegrepError as e:
            raise ParseError(f"invalid group {text!r}: {e.message}", text=text) from e

    @staticmethod
    def group_params(text: str):
        """(t, n, m, j) for a literal, without validation of the group invariants"""
        raw = text
        text = text.strip()
        if not text:
            raise ParseError("empty group literal", text=raw, position=0)

        if text in LiteralDecoder.ALIASES:
            return LiteralDecoder.ALIASES[text]

        match = _SQFREE.match(text)
        if match:
            values = {'t': 1, 'n': 1, 'm': 1, 'j': 1}
            offset = len('sqfree:')
            for part in match.group(1).split(','):
                key, sep, value = part.partition('=')
                key = key.strip()
                if not sep or key not in values or not value.strip().lstrip('-').isdigit():
                    raise ParseError(f"bad field {part!r} in group literal", text=raw,
                                     position=raw.find(part, offset))
                values[key] = int(value)
            return values['t'], values['n'], values['m'], values['j']

        match = _CYCLIC.match(text)
        if match:
            return int(match.group(1)), 1, 1, 1

        match = _DIHEDRAL.match(text)
        if match:
            order = int(match.group(1))
            if order % 2 or order < 6 or (order // 2) % 2 == 0:
                raise ParseError(f"D{order}: dihedral literals need order 2k with k odd, k >= 3",
                                 text=raw, position=1)
            k = order // 2
            return 1, k, 2, k - 1

        # C<q> x <rest>
        head, sep, rest = text.partition('x')
        if sep and _CYCLIC.match(head.strip()):
            q = int(head.strip()[1:])
            t, n, m, j = LiteralDecoder.group_params(rest)
            if gcd(q, t * n * m) != 1:
                raise ParseError(f"C{q} is not coprime to {rest.strip()}", text=raw, position=0)
            return q * t, n, m, j

        raise ParseError(f"unknown group literal {text!r}", text=raw, position=0)

    @staticmethod
    def parse_element(group, text: str) -> int:
        """
        Parse one element: "(a,b,c)", "a,b,c", "1" or a word like "z^2*y^-1*x"

        Returns:
            Element index in `group`
        """
        token = text.strip()
        match = _TRIPLE.match(token)
        if match:
            return group.index(tuple(int(v) for v in match.groups()))
        if token == '1':
            return 0

        current = (0, 0, 0)
        position = text.find(token)
        for factor in token.split('*'):
            stripped = factor.strip()
            found = _FACTOR.match(stripped)
            if not found:
                raise ParseError(f"cannot parse element factor {stripped!r}", text=text,
                                 position=position)
            letter, exp = found.group(1), int(found.group(2) or 1)
            step = {'z': (exp, 0, 0), 'y': (0, exp, 0), 'x': (0, 0, exp)}[letter]
            current = group.mul(current, group.reduce(step))
            position += len(factor) + 1
        return group.index(current)

    @staticmethod
    def parse_subgroup(group, text: str, named: Optional[Dict[str, Iterable[int]]] = None) -> List[int]:
        """Inline "<y, z^2>" or a caller-supplied name; returns the element list"""
        token = text.strip()
        if named and token in named:
            return sorted(int(e) for e in named[token])
        if token.startswith('<') and token.endswith('>'):
            inner = token[1:-1].strip()
            gens = [LiteralDecoder.parse_element(group, g) for g in inner.split(',')] if inner else []
            return [int(e) for e in group.closure(gens)]
        raise ParseError(f"unknown subgroup {token!r}", text=text, position=0)

    @staticmethod
    def _is_subgroup_token(token: str, named) -> bool:
        token = token.strip()
        return (token.startswith('<') and token.endswith('>')) or bool(named and token in named)

    @staticmethod
    def parse_set(group, text: str, named: Optional[Dict[str, Iterable[int]]] = None) -> List[int]:
        """
        Parse a connection set

        Items are separated by ';' (or ',' between words). Each item is an element,
        a coset "K*g" / "g*K", or the keyword "refl:all" (every reflection of a
        dihedral group).

        Args:
            group: SquarefreeGroup
            text: Set expression
            named: Optional subgroup name -> element list, for coset items

        Returns:
            Sorted element indices
        """
        elements = set()
        for item in LiteralDecoder._split_items(text):
            if item == 'refl:all':
                if not group.is_dihedral:
                    raise ParseError("refl:all needs a dihedral group", text=text,
                                     position=text.find(item))
                elements.update(group.index((0, b, 1)) for b in range(group.n))
                continue

            coset = LiteralDecoder._coset_elements(group, item, named)
            if coset is not None:
                elements.update(coset)
                continue

            elements.add(LiteralDecoder.parse_element(group, item))
        return sorted(elements)

    @staticmethod
    def _coset_elements(group, item: str, named) -> Optional[List[int]]:
        """Elements of "K*g" or "g*K", or None when the item is not a coset"""
        if '*' not in item:
            return None
        left, _, right = item.partition('*')
        if LiteralDecoder._is_subgroup_token(left, named):
            K = LiteralDecoder.parse_subgroup(group, left, named)
            g = group.triple(LiteralDecoder.parse_element(group, right))
            return [group.index(group.mul(group.triple(k), g)) for k in K]
        left, _, right = item.rpartition('*')
        if LiteralDecoder._is_subgroup_token(right, named):
            g = group.triple(LiteralDecoder.parse_element(group, left))
            K = LiteralDecoder.parse_subgroup(group, right, named)
            return [group.index(group.mul(g, group.triple(k))) for k in K]
        return None

    @staticmethod
    def _split_items(text: str) -> List[str]:
        items = []
        for chunk in LiteralDecoder._split_top(text, ';'):
            chunk = chunk.strip()
            if not chunk:
                continue
            if _TRIPLE.match(chunk):
                items.append(chunk)
            else:
                items.extend(p.strip() for p in LiteralDecoder._split_top(chunk, ',') if p.strip())
        return items

    @staticmethod
    def _split_top(text: str, sep: str) -> List[str]:
        """Split on `sep` outside () and <>"""
        parts, depth, start = [], 0, 0
        for i, ch in enumerate(text):
            if ch in '(<':
                depth += 1
            elif ch in ')>':
                depth -= 1
            elif ch == sep and depth == 0:
                parts.append(text[start:i])
                start = i + 1
        parts.append(text[start:])
        return parts

    @staticmethod
    def parse_permutation(text: str, degree: Optional[int] = None) -> List[int]:
        """
        Parse cycle notation "(0 1 2)(3 4)" (commas optional) into an image array

        Args:
            text: Cycles; "()" is the identity
            degree: Points 0..degree-1; defaults to 1 + largest point mentioned

        Returns:
            Image list
        """
        if not re.fullmatch(r'\s*(\([\d\s,]*\)\s*)*', text):
            bad = next((i for i, ch in enumerate(text) if ch not in '()0123456789 ,\t'), 0)
            raise ParseError("bad cycle notation", text=text, position=bad)

        cycles = [[int(p) for p in re.split(r'[\s,]+', body.strip()) if p]
                  for body in re.findall(r'\(([^)]*)\)', text)]
        points = [p for cycle in cycles for p in cycle]
        if len(points) != len(set(points)):
            raise ParseError("a point occurs twice in cycle notation", text=text, position=0)

        size = degree if degree is not None else (max(points) + 1 if points else 0)
        if points and max(points) >= size:
            raise ParseError(f"point {max(points)} exceeds degree {size}", text=text,
                             position=text.find(str(max(points))))
        image = list(range(size))
        for cycle in cycles:
            for i, p in enumerate(cycle):
                image[p] = cycle[(i + 1) % len(cycle)]
        return image

    @staticmethod
    def parse_generator_file(path, degree: Optional[int] = None) -> List[List[int]]:
        """One permutation per non-comment line; all padded to a common degree"""
        lines = [line.strip() for line in Path(path).read_text().splitlines()]
        cycles = [line for line in lines if line and not line.startswith('#')]
        perms = [LiteralDecoder.parse_permutation(line) for line in cycles]
        size = degree or max((len(p) for p in perms), default=0)
        return [p + list(range(len(p), size)) for p in perms]
