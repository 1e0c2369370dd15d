# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rule-matching kernel.

Each rule is evaluated with a forward reachability pass over run lengths:
after segment i the set of reachable end positions is a union of intervals,
so one difference-array sweep per segment suffices (no backtracking).
"""

from libc.stdlib cimport malloc, free, realloc
from libc.string cimport memset

cdef unsigned char CLS_TABLE[256]

cdef int _b
for _b in range(256):
    if 0x30 <= _b <= 0x39:
        CLS_TABLE[_b] = 1
    elif 0x61 <= _b <= 0x7A:
        CLS_TABLE[_b] = 2
    elif 0x41 <= _b <= 0x5A:
        CLS_TABLE[_b] = 4
    else:
        CLS_TABLE[_b] = 8

MASKS = {"digit": 1, "lowercase": 2, "uppercase": 4, "letter": 6, "symbol": 8, "any": 15}
CMP_CODES = {"==": 0, "<=": 1, ">=": 2}


cdef struct Seg:
    unsigned char mask
    int lo
    int hi          # -1 = unbounded


cdef struct Con:
    unsigned char mask
    int cmp
    int bound


cdef struct Rule:
    int seg_start
    int nseg
    int con_start
    int ncon
    int min_len
    int max_len     # -1 = unbounded


cdef class Program:
    cdef Seg* segs
    cdef Con* cons
    cdef Rule* rules
    cdef readonly int nrules
    # scratch buffers, grown on demand
    cdef int cap
    cdef int* run
    cdef int* diff
    cdef unsigned char* reach

    def __cinit__(self, patterns):
        patterns = list(patterns)
        cdef int nseg = sum(len(p.segments) for p in patterns)
        cdef int ncon = sum(len(p.constraints) for p in patterns)
        self.nrules = len(patterns)
        self.segs = <Seg*> malloc(max(nseg, 1) * sizeof(Seg))
        self.cons = <Con*> malloc(max(ncon, 1) * sizeof(Con))
        self.rules = <Rule*> malloc(max(self.nrules, 1) * sizeof(Rule))
        self.cap = 0
        self.run = NULL
        self.diff = NULL
        self.reach = NULL
        if not self.segs or not self.cons or not self.rules:
            raise MemoryError()
        cdef int si = 0, ci = 0, ri = 0
        cdef int lo, hi, total_lo, total_hi
        for p in patterns:
            self.rules[ri].seg_start = si
            self.rules[ri].con_start = ci
            self.rules[ri].nseg = len(p.segments)
            self.rules[ri].ncon = len(p.constraints)
            total_lo = 0
            total_hi = 0
            for s in p.segments:
                lo = s.quant.min
                hi = -1 if s.quant.max is None else s.quant.max
                self.segs[si].mask = MASKS[s.cls.kind]
                self.segs[si].lo = lo
                self.segs[si].hi = hi
                total_lo += lo
                if total_hi >= 0:
                    total_hi = -1 if hi < 0 else total_hi + hi
                si += 1
            self.rules[ri].min_len = total_lo
            self.rules[ri].max_len = total_hi
            for c in p.constraints:
                self.cons[ci].mask = MASKS[c.cls.kind]
                self.cons[ci].cmp = CMP_CODES[c.cmp]
                self.cons[ci].bound = c.bound
                ci += 1
            ri += 1

    def __dealloc__(self):
        free(self.segs)
        free(self.cons)
        free(self.rules)
        free(self.run)
        free(self.diff)
        free(self.reach)

    cdef int _reserve(self, int n) except -1:
        if n + 2 <= self.cap:
            return 0
        cdef int cap = max(n + 2, 320)
        cdef void* p
        p = realloc(self.run, cap * sizeof(int))
        if not p:
            raise MemoryError()
        self.run = <int*> p
        p = realloc(self.diff, cap * sizeof(int))
        if not p:
            raise MemoryError()
        self.diff = <int*> p
        p = realloc(self.reach, cap * sizeof(unsigned char))
        if not p:
            raise MemoryError()
        self.reach = <unsigned char*> p
        self.cap = cap
        return 0

    cdef bint _match_rule(self, int r, const unsigned char* s, int n, int* counts):
        cdef Rule* rule = &self.rules[r]
        cdef int i, p, k, q, lo, hi, acc, cnt
        cdef unsigned char m
        cdef Seg* seg
        cdef Con* con
        cdef bint any_reach
        if n < rule.min_len or (rule.max_len >= 0 and n > rule.max_len):
            return False
        for i in range(rule.ncon):
            con = &self.cons[rule.con_start + i]
            cnt = 0
            for k in range(4):
                if con.mask & (1 << k):
                    cnt += counts[k]
            if con.cmp == 0 and cnt != con.bound:
                return False
            if con.cmp == 1 and cnt > con.bound:
                return False
            if con.cmp == 2 and cnt < con.bound:
                return False
        memset(self.reach, 0, (n + 1) * sizeof(unsigned char))
        self.reach[0] = 1
        for i in range(rule.nseg):
            seg = &self.segs[rule.seg_start + i]
            m = seg.mask
            # run[p] = length of the maximal in-class run starting at p
            self.run[n] = 0
            for p in range(n - 1, -1, -1):
                if CLS_TABLE[s[p]] & m:
                    self.run[p] = self.run[p + 1] + 1
                else:
                    self.run[p] = 0
            memset(self.diff, 0, (n + 2) * sizeof(int))
            any_reach = False
            for p in range(n + 1):
                if not self.reach[p]:
                    continue
                lo = seg.lo
                if lo > self.run[p]:
                    continue
                hi = self.run[p]
                if seg.hi >= 0 and seg.hi < hi:
                    hi = seg.hi
                self.diff[p + lo] += 1
                self.diff[p + hi + 1] -= 1
                any_reach = True
            if not any_reach:
                return False
            acc = 0
            for q in range(n + 1):
                acc += self.diff[q]
                self.reach[q] = acc > 0
        return self.reach[n] != 0

    cdef object _mask(self, const unsigned char* s, int n):
        cdef int counts[4]
        cdef int p, r
        cdef unsigned char m
        cdef unsigned long long bits = 0
        counts[0] = counts[1] = counts[2] = counts[3] = 0
        for p in range(n):
            m = CLS_TABLE[s[p]]
            if m == 1:
                counts[0] += 1
            elif m == 2:
                counts[1] += 1
            elif m == 4:
                counts[2] += 1
            else:
                counts[3] += 1
        self._reserve(n)
        if self.nrules <= 64:
            for r in range(self.nrules):
                if self._match_rule(r, s, n, counts):
                    bits |= (<unsigned long long> 1) << r
            return bits
        cdef object big = 0
        for r in range(self.nrules):
            if self._match_rule(r, s, n, counts):
                big |= (<object> 1) << (<object> r)
        return big


def build_program(patterns):
    return Program(patterns)


def match_mask(Program program, bytes password):
    """Bitmask of the rules (bit i = rule i) that fully match `password`."""
    return program._mask(password, len(password))


def signature_counts(Program program, passwords):
    """Histogram ``{match_mask: count}`` over an iterable of byte strings."""
    cdef dict hist = {}
    cdef bytes pw
    for pw in passwords:
        key = program._mask(pw, len(pw))
        hist[key] = hist.get(key, 0) + 1
    return hist
