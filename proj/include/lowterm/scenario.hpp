#pragma once

// Text format for scenarios. A file names the ambient group, the normal
// subgroup, the coefficient module and the extension data in small brace
// blocks, and every scenario the library builds programmatically can be
// written back out and reparsed to an equivalent one.

#include <lowterm/spectral.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace lowterm {

// text that does not scan against the grammar
struct ParseError : std::runtime_error {
    long line, column;
    std::string token;
    ParseError(long l, long c, const std::string& msg, std::string tok)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " +
                             msg + " (got '" + tok + "')"),
          line(l), column(c), token(std::move(tok)) {}
};

// well-formed text describing inconsistent data
struct SemanticError : std::runtime_error {
    long line, column;
    SemanticError(long l, long c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

namespace detail {

struct ScnToken {
    enum Kind { Word, Number, Punct, End };
    Kind kind = End;
    std::string text;
    long long num = 0;
    long line = 1, col = 1;
};

// words admit '-' so library names like LIB-0 scan as one token; '#' starts
// a comment running to the end of the line
inline std::vector<ScnToken> scan_scenario(const std::string& text) {
    std::vector<ScnToken> out;
    long line = 1, col = 1;
    size_t i = 0;
    auto step = [&] {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') step();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            step();
            continue;
        }
        ScnToken t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = ScnToken::Word;
            while (i < text.size() && is_word(text[i])) {
                t.text += text[i];
                step();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            t.kind = ScnToken::Number;
            if (c == '-') {
                t.text += c;
                step();
            }
            if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                throw ParseError(t.line, t.col, "expected digits after '-'", t.text);
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                t.text += text[i];
                step();
            }
            try {
                t.num = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                throw ParseError(t.line, t.col, "integer literal out of range", t.text);
            }
        } else if (std::string("{}[]:;,").find(c) != std::string::npos) {
            t.kind = ScnToken::Punct;
            t.text = c;
            step();
        } else {
            throw ParseError(line, col, "unexpected character", std::string(1, c));
        }
        out.push_back(std::move(t));
    }
    ScnToken end;
    end.kind = ScnToken::End;
    end.text = "end of input";
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
    return out;
}

struct ScnCursor {
    std::vector<ScnToken> toks;
    size_t at = 0;

    const ScnToken& peek() const { return toks[at]; }
    ScnToken take() {
        ScnToken t = toks[at];
        if (t.kind != ScnToken::End) ++at;
        return t;
    }
    bool at_punct(char p) const {
        return peek().kind == ScnToken::Punct && peek().text[0] == p;
    }
    void expect(char p) {
        if (!at_punct(p))
            throw ParseError(peek().line, peek().col, std::string("expected '") + p + "'", peek().text);
        ++at;
    }
    ScnToken word(const char* what) {
        if (peek().kind != ScnToken::Word)
            throw ParseError(peek().line, peek().col, std::string("expected ") + what, peek().text);
        return take();
    }
    long long number(const char* what) {
        if (peek().kind != ScnToken::Number)
            throw ParseError(peek().line, peek().col, std::string("expected ") + what, peek().text);
        return take().num;
    }
};

inline std::vector<long long> scn_row(ScnCursor& ts) {
    ts.expect('[');
    std::vector<long long> out;
    if (!ts.at_punct(']')) {
        out.push_back(ts.number("an integer"));
        while (ts.at_punct(',')) {
            ts.take();
            out.push_back(ts.number("an integer"));
        }
    }
    ts.expect(']');
    return out;
}

inline std::vector<std::vector<long long>> scn_rows(ScnCursor& ts) {
    ts.expect('[');
    std::vector<std::vector<long long>> out;
    if (!ts.at_punct(']')) {
        out.push_back(scn_row(ts));
        while (ts.at_punct(',')) {
            ts.take();
            out.push_back(scn_row(ts));
        }
    }
    ts.expect(']');
    return out;
}

struct ScnModule {
    long long rank = -1;
    std::vector<std::vector<long long>> relations;
    std::vector<std::pair<long, std::vector<std::vector<long long>>>> actions;  // 1-based generator slot
    long line = 0, col = 0;
};

struct ScnFile {
    bool has_group = false;
    long group_line = 1, group_col = 1;
    std::string family;
    std::optional<long long> param;
    std::vector<std::vector<long long>> cayley;
    bool has_cayley = false;

    bool has_normal = false;
    long normal_line = 1, normal_col = 1;
    std::vector<long long> normal_elems;

    std::optional<ScnModule> module_m;

    bool has_ses = false;
    long ses_line = 1, ses_col = 1;
    bool has_cocycle = false;
    std::vector<std::vector<long long>> cocycle;
    std::map<std::string, ScnModule> ses_modules;
    std::vector<std::vector<long long>> inj, sur;
    bool has_inj = false, has_sur = false;

    bool has_options = false;
    long options_line = 1, options_col = 1;
    long long max_degree = 4;
    std::string name = "scenario";

    long end_line = 1, end_col = 1;
};

inline ScnModule scn_module_block(ScnCursor& ts, const ScnToken& at) {
    ScnModule m;
    m.line = at.line;
    m.col = at.col;
    ts.expect('{');
    while (!ts.at_punct('}')) {
        ScnToken key = ts.word("a module key");
        if (key.text == "rank") {
            ts.expect(':');
            m.rank = ts.number("the rank");
            ts.expect(';');
        } else if (key.text == "relations") {
            ts.expect(':');
            m.relations = scn_rows(ts);
            ts.expect(';');
        } else if (key.text == "action") {
            ScnToken gen = ts.word("a generator name like g1");
            long idx = 0;
            bool ok = gen.text.size() >= 2 && gen.text[0] == 'g';
            for (size_t k = 1; ok && k < gen.text.size(); ++k) {
                if (!std::isdigit(static_cast<unsigned char>(gen.text[k])))
                    ok = false;
                else
                    idx = idx * 10 + (gen.text[k] - '0');
            }
            if (!ok || idx < 1)
                throw ParseError(gen.line, gen.col, "expected a generator name like g1", gen.text);
            for (const auto& [j, rows] : m.actions)
                if (j == idx) throw ParseError(gen.line, gen.col, "duplicate action", gen.text);
            ts.expect(':');
            auto rows = scn_rows(ts);
            ts.expect(';');
            m.actions.emplace_back(idx, std::move(rows));
        } else {
            throw ParseError(key.line, key.col, "unknown module key", key.text);
        }
    }
    ts.expect('}');
    return m;
}

// identity located, then a greedy generating set grown by closure
inline GrpPtr scn_cayley_group(const std::vector<std::vector<long long>>& rows, long line, long col) {
    const long n = static_cast<long>(rows.size());
    if (n == 0) throw SemanticError(line, col, "group: cayley table is empty");
    std::vector<std::vector<long>> t(n);
    for (long a = 0; a < n; ++a) {
        if (static_cast<long>(rows[a].size()) != n)
            throw SemanticError(line, col, "group: cayley table is not square");
        t[a].resize(n);
        for (long b = 0; b < n; ++b) {
            if (rows[a][b] < 0 || rows[a][b] >= n)
                throw SemanticError(line, col, "group: cayley entry out of range");
            t[a][b] = static_cast<long>(rows[a][b]);
        }
    }
    long id = -1;
    for (long e = 0; e < n && id < 0; ++e) {
        bool ok = true;
        for (long a = 0; a < n && ok; ++a) ok = t[e][a] == a && t[a][e] == a;
        if (ok) id = e;
    }
    if (id < 0) throw SemanticError(line, col, "group: cayley table has no identity");
    std::vector<char> in(n, 0);
    in[id] = 1;
    auto close = [&] {
        bool again = true;
        while (again) {
            again = false;
            for (long a = 0; a < n; ++a) {
                if (!in[a]) continue;
                for (long b = 0; b < n; ++b)
                    if (in[b] && !in[t[a][b]]) {
                        in[t[a][b]] = 1;
                        again = true;
                    }
            }
        }
    };
    std::vector<long> gens;
    for (long x = 0; x < n; ++x)
        if (!in[x]) {
            gens.push_back(x);
            in[x] = 1;
            close();
        }
    std::vector<std::string> labels(n);
    for (long a = 0; a < n; ++a) labels[a] = "x" + std::to_string(a);
    try {
        return std::make_shared<FiniteGroup>(std::move(t), std::move(labels), std::move(gens), "cayley");
    } catch (const NotAGroup& e) {
        throw SemanticError(line, col, std::string("group: ") + e.what());
    }
}

inline ModulePtr scn_build_module(const GrpPtr& grp, const ScnModule& sp, const std::string& where) {
    if (sp.rank < 0) throw SemanticError(sp.line, sp.col, where + ": rank required");
    const long r = static_cast<long>(sp.rank);
    IntMatrix rels(r, static_cast<long>(sp.relations.size()));
    for (long j = 0; j < rels.cols; ++j) {
        if (static_cast<long>(sp.relations[j].size()) != r)
            throw SemanticError(sp.line, sp.col, where + ": relation row length must equal the rank");
        for (long i = 0; i < r; ++i) rels(i, j) = Int(sp.relations[j][i]);
    }
    GroupPtr ab = from_relations(r, rels);
    if (sp.actions.empty()) return trivial_module(grp, ab);
    const long k = static_cast<long>(grp->gens().size());
    for (const auto& [idx, rows] : sp.actions)
        if (idx > k)
            throw SemanticError(sp.line, sp.col,
                                where + ": the group has " + std::to_string(k) + " generators, no g" +
                                    std::to_string(idx));
    std::vector<IntMatrix> acts;
    for (long s = 1; s <= k; ++s) {
        const std::vector<std::vector<long long>>* rows = nullptr;
        for (const auto& [idx, rr] : sp.actions)
            if (idx == s) rows = &rr;
        if (!rows)
            throw SemanticError(sp.line, sp.col,
                                where + ": action g" + std::to_string(s) +
                                    " missing (one per group generator)");
        if (static_cast<long>(rows->size()) != r)
            throw SemanticError(sp.line, sp.col, where + ": action matrix must be rank x rank");
        IntMatrix a(r, r);
        for (long i = 0; i < r; ++i) {
            if (static_cast<long>((*rows)[i].size()) != r)
                throw SemanticError(sp.line, sp.col, where + ": action matrix must be rank x rank");
            for (long j = 0; j < r; ++j) a(i, j) = Int((*rows)[i][j]);
        }
        acts.push_back(std::move(a));
    }
    try {
        return module_from_generator_actions(grp, ab, acts);
    } catch (const std::exception& e) {
        throw SemanticError(sp.line, sp.col, where + ": " + e.what());
    }
}

inline Scenario scn_build(const ScnFile& f) {
    if (!f.has_group) throw ParseError(f.end_line, f.end_col, "missing group section", "end of input");
    if (!f.module_m) throw ParseError(f.end_line, f.end_col, "missing module M section", "end of input");
    if (f.max_degree < 2)
        throw SemanticError(f.options_line, f.options_col, "options: max_degree must be at least 2");
    Scenario s;
    s.name = f.name;
    s.max_degree = static_cast<long>(f.max_degree);

    if (f.has_cayley) {
        if (!f.family.empty())
            throw SemanticError(f.group_line, f.group_col,
                                "group: give either a family or a cayley table, not both");
        s.g = scn_cayley_group(f.cayley, f.group_line, f.group_col);
    } else if (f.family.empty()) {
        throw SemanticError(f.group_line, f.group_col, "group: family or cayley required");
    } else if (f.param) {
        if (*f.param < 1)
            throw SemanticError(f.group_line, f.group_col, "group: param must be positive");
        if (f.family == "cyclic")
            s.g = cyclic_group(static_cast<long>(*f.param));
        else if (f.family == "dihedral")
            s.g = dihedral_group(static_cast<long>(*f.param));
        else
            throw SemanticError(f.group_line, f.group_col,
                                "group: param applies to the cyclic and dihedral families only");
    } else {
        try {
            s.g = builtin_group(f.family);
        } catch (const std::exception& e) {
            throw SemanticError(f.group_line, f.group_col, std::string("group: ") + e.what());
        }
    }

    std::vector<long> elems;
    if (f.has_normal) {
        for (long long v : f.normal_elems) {
            if (v < 0 || v >= s.g->order())
                throw SemanticError(f.normal_line, f.normal_col, "normal: element index out of range");
            elems.push_back(static_cast<long>(v));
        }
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
        if (elems.empty())
            throw SemanticError(f.normal_line, f.normal_col, "normal: elements list is empty");
        auto member = [&](long x) { return std::binary_search(elems.begin(), elems.end(), x); };
        if (!member(s.g->id()))
            throw SemanticError(f.normal_line, f.normal_col,
                                "normal: the identity " + s.g->label(s.g->id()) + " is missing");
        for (long a : elems)
            for (long b : elems) {
                long c = s.g->mul(a, b);
                if (!member(c))
                    throw SemanticError(f.normal_line, f.normal_col,
                                        "normal: not closed, " + s.g->label(a) + " * " + s.g->label(b) +
                                            " = " + s.g->label(c) + " is outside the list");
            }
    } else {
        elems = {s.g->id()};
    }
    Subgroup sub;
    try {
        sub = subgroup_from_elements(s.g, elems);
    } catch (const std::exception& e) {
        throw SemanticError(f.normal_line, f.normal_col, std::string("normal: ") + e.what());
    }
    for (long g = 0; g < s.g->order(); ++g)
        for (long x : sub.elems) {
            long c = s.g->mul(s.g->mul(g, x), s.g->inv(g));
            if (!std::binary_search(sub.elems.begin(), sub.elems.end(), c))
                throw SemanticError(f.normal_line, f.normal_col,
                                    "normal: conjugating " + s.g->label(x) + " by " + s.g->label(g) +
                                        " gives " + s.g->label(c) + " outside the subgroup");
        }
    s.n = std::move(sub);

    s.m = scn_build_module(s.g, *f.module_m, "module M");

    if (f.has_ses) {
        QuotientGroup quot = quotient_group(s.n);
        bool expl = !f.ses_modules.empty() || f.has_inj || f.has_sur;
        if (f.has_cocycle && expl)
            throw SemanticError(f.ses_line, f.ses_col,
                                "ses: give either a cocycle or an explicit extension, not both");
        if (f.has_cocycle) {
            FixedPoints fx = fixed_points(s.m, s.n, quot);
            const long q = quot.q->order();
            const long r = fx.module->rank();
            if (static_cast<long>(f.cocycle.size()) != q)
                throw SemanticError(f.ses_line, f.ses_col,
                                    "ses: cocycle needs one vector per quotient element (" +
                                        std::to_string(q) + ")");
            std::vector<IntVec> u;
            for (const auto& row : f.cocycle) {
                if (static_cast<long>(row.size()) != r)
                    throw SemanticError(f.ses_line, f.ses_col,
                                        "ses: cocycle vectors must match the invariant rank (" +
                                            std::to_string(r) + ")");
                IntVec v(r);
                for (long i = 0; i < r; ++i) v[i] = Int(row[i]);
                u.push_back(std::move(v));
            }
            try {
                extension_from_cocycle(fx.module, u);
            } catch (const NotACocycle& e) {
                throw SemanticError(f.ses_line, f.ses_col,
                                    "ses: cocycle identity fails at quotient pair (" +
                                        quot.q->label(e.g) + ", " + quot.q->label(e.h) + ")");
            } catch (const std::exception& e) {
                throw SemanticError(f.ses_line, f.ses_col, std::string("ses: ") + e.what());
            }
            s.cocycle = std::move(u);
        } else if (expl) {
            for (const char* nm : {"A", "B", "C"})
                if (!f.ses_modules.count(nm))
                    throw SemanticError(f.ses_line, f.ses_col,
                                        std::string("ses: module ") + nm +
                                            " required for the explicit form");
            if (!f.has_inj || !f.has_sur)
                throw SemanticError(f.ses_line, f.ses_col,
                                    "ses: explicit form needs inj and sur matrices");
            ModulePtr A = scn_build_module(quot.q, f.ses_modules.at("A"), "ses module A");
            ModulePtr B = scn_build_module(quot.q, f.ses_modules.at("B"), "ses module B");
            ModulePtr C = scn_build_module(quot.q, f.ses_modules.at("C"), "ses module C");
            auto to_matrix = [&](const std::vector<std::vector<long long>>& rows, long nr, long nc,
                                 const char* which) {
                if (static_cast<long>(rows.size()) != nr)
                    throw SemanticError(f.ses_line, f.ses_col,
                                        std::string("ses: ") + which + " must have one row per target generator");
                IntMatrix m(nr, nc);
                for (long i = 0; i < nr; ++i) {
                    if (static_cast<long>(rows[i].size()) != nc)
                        throw SemanticError(f.ses_line, f.ses_col,
                                            std::string("ses: ") + which + " row length must equal the source rank");
                    for (long j = 0; j < nc; ++j) m(i, j) = Int(rows[i][j]);
                }
                return m;
            };
            IntMatrix mi = to_matrix(f.inj, B->rank(), A->rank(), "inj");
            IntMatrix ms = to_matrix(f.sur, C->rank(), B->rank(), "sur");
            try {
                if (C->rank() != 1 || C->ab()->rels().cols != 0)
                    throw std::invalid_argument("the quotient coefficient C must be the trivial Z");
                for (long g = 0; g < quot.q->order(); ++g)
                    if (C->act(g)(0, 0) != Int(1))
                        throw std::invalid_argument("the quotient coefficient C must carry the trivial action");
                s.explicit_ses = make_module_ses(make_gmodule_morphism(A, B, mi),
                                                make_gmodule_morphism(B, C, ms));
            } catch (const std::exception& e) {
                throw SemanticError(f.ses_line, f.ses_col, std::string("ses: ") + e.what());
            }
        } else {
            throw SemanticError(f.ses_line, f.ses_col, "ses: cocycle or explicit extension required");
        }
    }
    return s;
}

inline void scn_emit_matrix(std::ostream& os, const IntMatrix& m) {
    os << "[";
    for (long i = 0; i < m.rows; ++i) {
        os << (i ? ", [" : "[");
        for (long j = 0; j < m.cols; ++j) os << (j ? ", " : "") << m(i, j);
        os << "]";
    }
    os << "]";
}

inline void scn_emit_module(std::ostream& os, const ModulePtr& m, const std::string& nm,
                            const std::string& ind) {
    os << ind << "module " << nm << " {\n";
    os << ind << "  rank: " << m->rank() << ";\n";
    const IntMatrix& rels = m->ab()->rels();
    if (rels.cols > 0) {
        // one file row per relation, so the stored columns come out transposed
        os << ind << "  relations: [";
        for (long j = 0; j < rels.cols; ++j) {
            os << (j ? ", [" : "[");
            for (long i = 0; i < rels.rows; ++i) os << (i ? ", " : "") << rels(i, j);
            os << "]";
        }
        os << "];\n";
    }
    std::vector<IntMatrix> acts;
    bool trivial = true;
    for (long g : m->group()->gens()) {
        IntMatrix a = m->act(g);
        for (long i = 0; trivial && i < a.rows; ++i)
            for (long j = 0; trivial && j < a.cols; ++j)
                if (a(i, j) != Int(i == j ? 1 : 0)) trivial = false;
        acts.push_back(std::move(a));
    }
    if (!trivial)
        for (size_t k = 0; k < acts.size(); ++k) {
            os << ind << "  action g" << (k + 1) << ": ";
            scn_emit_matrix(os, acts[k]);
            os << ";\n";
        }
    os << ind << "}\n";
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
    detail::ScnCursor ts{detail::scan_scenario(text)};
    detail::ScnFile f;
    while (ts.peek().kind != detail::ScnToken::End) {
        detail::ScnToken sec = ts.word("a section name");
        if (sec.text == "group") {
            if (f.has_group) throw ParseError(sec.line, sec.col, "duplicate section", sec.text);
            f.has_group = true;
            f.group_line = sec.line;
            f.group_col = sec.col;
            ts.expect('{');
            while (!ts.at_punct('}')) {
                detail::ScnToken key = ts.word("a group key");
                if (key.text == "family") {
                    ts.expect(':');
                    f.family = ts.word("a family name").text;
                    ts.expect(';');
                } else if (key.text == "param") {
                    ts.expect(':');
                    f.param = ts.number("a parameter");
                    ts.expect(';');
                } else if (key.text == "cayley") {
                    ts.expect(':');
                    f.cayley = detail::scn_rows(ts);
                    f.has_cayley = true;
                    ts.expect(';');
                } else {
                    throw ParseError(key.line, key.col, "unknown group key", key.text);
                }
            }
            ts.expect('}');
        } else if (sec.text == "normal") {
            if (f.has_normal) throw ParseError(sec.line, sec.col, "duplicate section", sec.text);
            f.has_normal = true;
            f.normal_line = sec.line;
            f.normal_col = sec.col;
            ts.expect('{');
            while (!ts.at_punct('}')) {
                detail::ScnToken key = ts.word("a normal key");
                if (key.text == "elements") {
                    ts.expect(':');
                    f.normal_elems = detail::scn_row(ts);
                    ts.expect(';');
                } else {
                    throw ParseError(key.line, key.col, "unknown normal key", key.text);
                }
            }
            ts.expect('}');
        } else if (sec.text == "module") {
            detail::ScnToken nm = ts.word("the module name M");
            if (nm.text != "M") throw ParseError(nm.line, nm.col, "the top-level module must be M", nm.text);
            if (f.module_m) throw ParseError(sec.line, sec.col, "duplicate section", sec.text);
            f.module_m = detail::scn_module_block(ts, sec);
        } else if (sec.text == "ses") {
            if (f.has_ses) throw ParseError(sec.line, sec.col, "duplicate section", sec.text);
            f.has_ses = true;
            f.ses_line = sec.line;
            f.ses_col = sec.col;
            ts.expect('{');
            while (!ts.at_punct('}')) {
                detail::ScnToken key = ts.word("a ses key");
                if (key.text == "cocycle") {
                    ts.expect(':');
                    f.cocycle = detail::scn_rows(ts);
                    f.has_cocycle = true;
                    ts.expect(';');
                } else if (key.text == "inj") {
                    ts.expect(':');
                    f.inj = detail::scn_rows(ts);
                    f.has_inj = true;
                    ts.expect(';');
                } else if (key.text == "sur") {
                    ts.expect(':');
                    f.sur = detail::scn_rows(ts);
                    f.has_sur = true;
                    ts.expect(';');
                } else if (key.text == "module") {
                    detail::ScnToken nm = ts.word("a module name (A, B or C)");
                    if (nm.text != "A" && nm.text != "B" && nm.text != "C")
                        throw ParseError(nm.line, nm.col, "ses modules must be named A, B or C", nm.text);
                    if (f.ses_modules.count(nm.text))
                        throw ParseError(nm.line, nm.col, "duplicate module", nm.text);
                    f.ses_modules.emplace(nm.text, detail::scn_module_block(ts, nm));
                } else {
                    throw ParseError(key.line, key.col, "unknown ses key", key.text);
                }
            }
            ts.expect('}');
        } else if (sec.text == "options") {
            if (f.has_options) throw ParseError(sec.line, sec.col, "duplicate section", sec.text);
            f.has_options = true;
            f.options_line = sec.line;
            f.options_col = sec.col;
            ts.expect('{');
            while (!ts.at_punct('}')) {
                detail::ScnToken key = ts.word("an options key");
                if (key.text == "max_degree") {
                    ts.expect(':');
                    f.max_degree = ts.number("a degree");
                    ts.expect(';');
                } else if (key.text == "name") {
                    ts.expect(':');
                    f.name = ts.word("a name").text;
                    ts.expect(';');
                } else {
                    throw ParseError(key.line, key.col, "unknown options key", key.text);
                }
            }
            ts.expect('}');
        } else {
            throw ParseError(sec.line, sec.col, "unknown section", sec.text);
        }
    }
    f.end_line = ts.peek().line;
    f.end_col = ts.peek().col;
    return detail::scn_build(f);
}

// writes the family form whenever the group's name reproduces its table,
// and a raw cayley table otherwise
inline std::string serialize_scenario(const Scenario& s) {
    if (!s.g || !s.m) throw std::invalid_argument("scenario: group and module required");
    std::ostringstream os;
    os << "group {\n";
    bool family = false;
    try {
        GrpPtr b = builtin_group(s.g->name());
        family = b->order() == s.g->order() && b->gens() == s.g->gens();
        for (long a = 0; family && a < b->order(); ++a)
            for (long c = 0; family && c < b->order(); ++c)
                if (b->mul(a, c) != s.g->mul(a, c)) family = false;
    } catch (const std::exception&) {
    }
    if (family) {
        os << "  family: " << s.g->name() << ";\n";
    } else {
        os << "  cayley: [";
        for (long a = 0; a < s.g->order(); ++a) {
            os << (a ? ", [" : "[");
            for (long c = 0; c < s.g->order(); ++c) os << (c ? ", " : "") << s.g->mul(a, c);
            os << "]";
        }
        os << "];\n";
    }
    os << "}\n\n";
    std::vector<long> elems = s.n.parent ? s.n.elems : std::vector<long>{s.g->id()};
    os << "normal {\n  elements: [";
    for (size_t i = 0; i < elems.size(); ++i) os << (i ? ", " : "") << elems[i];
    os << "];\n}\n\n";
    detail::scn_emit_module(os, s.m, "M", "");
    if (s.explicit_ses) {
        os << "\nses {\n";
        detail::scn_emit_module(os, s.explicit_ses->inj.src, "A", "  ");
        detail::scn_emit_module(os, s.explicit_ses->inj.tgt, "B", "  ");
        detail::scn_emit_module(os, s.explicit_ses->sur.tgt, "C", "  ");
        os << "  inj: ";
        detail::scn_emit_matrix(os, s.explicit_ses->inj.mat);
        os << ";\n  sur: ";
        detail::scn_emit_matrix(os, s.explicit_ses->sur.mat);
        os << ";\n}\n";
    } else if (!s.cocycle.empty()) {
        os << "\nses {\n  cocycle: [";
        for (size_t i = 0; i < s.cocycle.size(); ++i) {
            os << (i ? ", [" : "[");
            for (size_t j = 0; j < s.cocycle[i].size(); ++j) os << (j ? ", " : "") << s.cocycle[i][j];
            os << "]";
        }
        os << "];\n}\n";
    }
    os << "\noptions {\n  max_degree: " << s.max_degree << ";\n  name: " << s.name << ";\n}\n";
    return os.str();
}

// the scenarios exercised by the test suite and shipped with the tool
inline std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> out;
    {
        // order two, trivial subgroup: the window collapses onto one row
        Scenario s;
        s.name = "LIB-0";
        s.g = builtin_group("C2");
        s.n = subgroup_from_elements(s.g, {0});
        s.m = trivial_module(s.g, cyclic_fgab(2));
        s.max_degree = 4;
        out.push_back(std::move(s));
    }
    {
        // C4 over its order-two subgroup with the nonsplit extension class
        Scenario s;
        s.name = "LIB-1";
        s.g = builtin_group("C4");
        s.n = subgroup_from_elements(s.g, {0, 2});
        s.m = trivial_module(s.g, cyclic_fgab(2));
        s.cocycle = {{Int(0)}, {Int(1)}};
        s.max_degree = 4;
        out.push_back(std::move(s));
    }
    {
        // nonabelian ambient group, quotient of order two over the rotations
        Scenario s;
        s.name = "LIB-2";
        s.g = builtin_group("S3");
        s.n = subgroup_from_elements(s.g, {0, 1, 2});
        s.m = trivial_module(s.g, cyclic_fgab(3));
        s.max_degree = 4;
        out.push_back(std::move(s));
    }
    {
        // free rank-one coefficients with a sign action on half the group
        Scenario s;
        s.name = "LIB-3";
        s.g = builtin_group("K4");
        s.n = subgroup_from_elements(s.g, {0, 1});
        IntMatrix neg(1, 1);
        neg(0, 0) = Int(-1);
        s.m = module_from_generator_actions(s.g, free_group(1), {IntMatrix::identity(1), neg});
        s.cocycle = {{Int(0)}, {Int(1)}};
        s.max_degree = 4;
        out.push_back(std::move(s));
    }
    {
        // odd order with a three-step window, so no appended e3 ladder
        Scenario s;
        s.name = "LIB-4";
        s.g = builtin_group("C9");
        s.n = subgroup_from_elements(s.g, {0, 3, 6});
        s.m = trivial_module(s.g, cyclic_fgab(3));
        s.cocycle = {{Int(0)}, {Int(1)}, {Int(2)}};
        s.max_degree = 3;
        out.push_back(std::move(s));
    }
    return out;
}

inline std::optional<Scenario> builtin_scenario(const std::string& name) {
    for (Scenario& s : builtin_scenarios())
        if (s.name == name) return std::move(s);
    return std::nullopt;
}

}  // namespace lowterm
