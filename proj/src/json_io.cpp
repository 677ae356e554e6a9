#include "saecula/json_io.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace saecula {

namespace {

using json = nlohmann::ordered_json;

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("input is not valid JSON");
    return j;
}

Int to_int(const json& j, const char* what) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        Int v;
        if (v.set_str(j.get<std::string>(), 10) != 0)
            throw SchemaError(std::string(what) + ": not an integer");
        return v;
    }
    throw SchemaError(std::string(what) + ": expected an integer");
}

long to_long(const json& j, const char* what) {
    if (!j.is_number_integer()) throw SchemaError(std::string(what) + ": expected an integer");
    return static_cast<long>(j.get<long long>());
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw SchemaError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

json int_json(const Int& v) {
    if (v.fits_slong_p()) return json(v.get_si());
    return json(v.get_str());
}

json vec_json(const std::vector<Int>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(int_json(x));
    return a;
}

json matrix_cols_json(const IntMatrix& m) {
    json a = json::array();
    for (int j = 0; j < m.cols; ++j) a.push_back(vec_json(m.column(j)));
    return a;
}

json shape_json(const QuotientShape& s) {
    json j;
    j["free_rank"] = s.free_rank;
    json t = json::array();
    for (const auto& d : s.invariant_factors) t.push_back(int_json(d));
    j["torsion"] = t;
    return j;
}

json jh_json(const JhVector& v) {
    json j;
    j["finite"] = v.finite;
    j["free_rank"] = v.free_rank;
    json t = json::object();
    for (const auto& [p, m] : v.torsion)
        if (m != 0) t[p.get_str()] = m;
    j["torsion"] = t;
    return j;
}

json interval_val(const Interval& itv, long n) {
    json j = json::array();
    j.push_back(itv.p);
    if (itv.q == n + 1)
        j.push_back("inf");
    else
        j.push_back(itv.q);
    return j;
}

std::string interval_str(const Interval& itv, long n) {
    std::ostringstream os;
    os << "[" << itv.p << ", ";
    if (itv.q == n + 1)
        os << "inf";
    else
        os << itv.q;
    os << ")";
    return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sparse_str(const std::vector<std::pair<long, Int>>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << " ";
        if (v[i].second == 1)
            os << "c" << v[i].first;
        else
            os << v[i].second << "*c" << v[i].first;
    }
    if (v.empty()) os << "0";
    return os.str();
}

} // namespace

Coeff parse_coeff(const std::string& tag) {
    if (tag == "z") return Coeff::z();
    if (tag == "q") return Coeff::q();
    if (tag.rfind("fp:", 0) == 0) {
        const std::string body = tag.substr(3);
        if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos)
            throw SchemaError("bad field tag: " + tag);
        long long p = 0;
        try {
            p = std::stoll(body);
        } catch (...) {
            throw SchemaError("bad field tag: " + tag);
        }
        if (p < 2) throw SchemaError("field characteristic must be at least 2");
        return Coeff::fp(p);
    }
    throw SchemaError("unknown coefficient tag: " + tag);
}

ChainDiagram parse_chain_diagram(const std::string& text) {
    json j = parse_text(text);
    ChainDiagram d;
    const json& ct = field(j, "coeff");
    if (!ct.is_string()) throw SchemaError("\"coeff\" must be a string");
    d.coeff = parse_coeff(ct.get<std::string>());

    const json& objs = field(j, "objects");
    if (!objs.is_array() || objs.empty()) throw SchemaError("\"objects\" must be a nonempty array");
    for (const json& o : objs) {
        AbPresentation pres;
        pres.coeff = d.coeff;
        pres.ambient_rank = to_long(field(o, "rank"), "rank");
        if (pres.ambient_rank < 0) throw SchemaError("rank must be nonnegative");
        std::vector<std::vector<Int>> rels;
        const json& rj = field(o, "relations");
        if (!rj.is_array()) throw SchemaError("\"relations\" must be an array");
        for (const json& col : rj) {
            if (!col.is_array() || static_cast<long>(col.size()) != pres.ambient_rank)
                throw SchemaError("relation length must equal rank");
            std::vector<Int> v;
            for (const json& e : col) v.push_back(to_int(e, "relation entry"));
            rels.push_back(std::move(v));
        }
        pres.relations = col_basis(
            IntMatrix::from_columns(static_cast<int>(pres.ambient_rank), rels), d.coeff);
        d.objects.push_back(std::move(pres));
    }

    const json& maps = field(j, "maps");
    if (!maps.is_array() || maps.size() + 1 != objs.size())
        throw SchemaError("\"maps\" must hold one matrix per consecutive pair");
    for (size_t i = 0; i < maps.size(); ++i) {
        const json& mj = maps[i];
        long rows = d.objects[i + 1].ambient_rank, cols = d.objects[i].ambient_rank;
        if (!mj.is_array() || static_cast<long>(mj.size()) != rows)
            throw SchemaError("map has wrong row count");
        AbHom h;
        h.source = d.objects[i];
        h.target = d.objects[i + 1];
        h.matrix = IntMatrix(static_cast<int>(rows), static_cast<int>(cols));
        for (long r = 0; r < rows; ++r) {
            const json& row = mj[static_cast<size_t>(r)];
            if (!row.is_array() || static_cast<long>(row.size()) != cols)
                throw SchemaError("map has wrong column count");
            for (long c = 0; c < cols; ++c)
                h.matrix.at(static_cast<int>(r), static_cast<int>(c)) =
                    to_int(row[static_cast<size_t>(c)], "map entry");
        }
        d.steps.push_back(std::move(h));
    }
    return d;
}

FilteredComplex parse_filtered_complex(const std::string& text) {
    json j = parse_text(text);
    FilteredComplex x;
    const json& ct = field(j, "coeff");
    if (!ct.is_string()) throw SchemaError("\"coeff\" must be a string");
    x.coeff = parse_coeff(ct.get<std::string>());
    const json& cells = field(j, "cells");
    if (!cells.is_array()) throw SchemaError("\"cells\" must be an array");
    for (const json& cj : cells) {
        Cell c;
        c.id = to_long(field(cj, "id"), "id");
        c.dim = to_long(field(cj, "dim"), "dim");
        c.grade = to_long(field(cj, "grade"), "grade");
        const json& bd = field(cj, "boundary");
        if (!bd.is_array()) throw SchemaError("\"boundary\" must be an array");
        for (const json& e : bd) {
            if (!e.is_array() || e.size() != 2)
                throw SchemaError("boundary entries are [cell id, coefficient] pairs");
            c.boundary.push_back({to_long(e[0], "boundary id"), to_int(e[1], "boundary coefficient")});
        }
        x.cells.push_back(std::move(c));
    }
    return x;
}

GroupDiagram parse_group_diagram(const std::string& text) {
    json j = parse_text(text);
    GroupDiagram d;
    const json& groups = field(j, "groups");
    if (!groups.is_array() || groups.empty())
        throw SchemaError("\"groups\" must be a nonempty array");
    for (const json& gj : groups) {
        const json& tj = field(gj, "table");
        if (!tj.is_array()) throw SchemaError("\"table\" must be an array");
        std::vector<std::vector<int>> table;
        for (const json& row : tj) {
            if (!row.is_array()) throw SchemaError("\"table\" rows must be arrays");
            std::vector<int> r;
            for (const json& e : row) r.push_back(static_cast<int>(to_long(e, "table entry")));
            table.push_back(std::move(r));
        }
        d.groups.push_back(make_group(std::move(table)));
    }
    const json& maps = field(j, "maps");
    if (!maps.is_array() || maps.size() + 1 != groups.size())
        throw SchemaError("\"maps\" must hold one map per consecutive pair");
    for (size_t i = 0; i < maps.size(); ++i) {
        const json& mj = maps[i];
        if (!mj.is_array()) throw SchemaError("maps must be arrays of element images");
        GroupHom h;
        h.source = d.groups[i];
        h.target = d.groups[i + 1];
        for (const json& e : mj) h.map.push_back(static_cast<int>(to_long(e, "map image")));
        d.steps.push_back(std::move(h));
    }
    return d;
}

std::string interval_json(const Interval& itv, long n) { return dump(interval_val(itv, n)); }

std::string barcode_json(const Barcode& bc, long n) {
    json bars = json::array();
    for (const auto& [itv, f] : bc) {
        json b;
        b["interval"] = interval_val(itv, n);
        b["shape"] = shape_json(f.shape);
        b["generators"] = matrix_cols_json(f.generators);
        bars.push_back(std::move(b));
    }
    json out;
    out["bars"] = bars;
    return dump(out);
}

std::string barcode_table(const Barcode& bc, long n) {
    std::ostringstream os;
    for (const auto& [itv, f] : bc) {
        os << std::left << std::setw(12) << interval_str(itv, n) << std::setw(14)
           << shape_str(f.shape);
        os << " gens:";
        for (int j = 0; j < f.generators.cols; ++j) {
            os << " (";
            for (int i = 0; i < f.generators.rows; ++i) {
                if (i) os << ",";
                os << f.generators.at(i, j);
            }
            os << ")";
        }
        os << "\n";
    }
    if (bc.empty()) os << "(empty barcode)\n";
    return os.str();
}

std::string cdf_json(const CdfTable& t) {
    json entries = json::array();
    for (long p = 1; p <= t.n; ++p)
        for (long q = p + 1; q <= t.n + 1; ++q) {
            json e;
            e["p"] = p;
            e["q"] = q;
            json parts = json::array();
            for (long a = 1; a <= t.n; ++a) {
                const SubgroupElt& s = t.at(p, q).part(a);
                parts.push_back(shape_json(quotient_shape(s, sub_zero(s.parent))));
            }
            e["parts"] = parts;
            entries.push_back(std::move(e));
        }
    json out;
    out["n"] = t.n;
    out["entries"] = entries;
    return dump(out);
}

std::string cdf_table_text(const CdfTable& t) {
    std::ostringstream os;
    for (long p = 1; p <= t.n; ++p)
        for (long q = p + 1; q <= t.n + 1; ++q) {
            os << "A[" << p << "][" << q << "]:";
            for (long a = 1; a <= t.n; ++a) {
                const SubgroupElt& s = t.at(p, q).part(a);
                os << "  " << shape_str(quotient_shape(s, sub_zero(s.parent)));
            }
            os << "\n";
        }
    return os.str();
}

std::string series_json(const SubsaecularSeries& s, long n) {
    json steps = json::array();
    for (const auto& st : s.steps) {
        json e;
        e["interval"] = interval_val(st.support, n);
        e["shape"] = shape_json(st.shape);
        steps.push_back(std::move(e));
    }
    json reduced = json::array();
    for (const auto& st : s.reduced) {
        json e;
        e["interval"] = interval_val(st.support, n);
        e["shape"] = shape_json(st.shape);
        reduced.push_back(std::move(e));
    }
    json lin = json::array();
    for (const auto& itv : s.linearization) lin.push_back(interval_val(itv, n));
    json out;
    out["linearization"] = lin;
    out["steps"] = steps;
    out["reduced"] = reduced;
    return dump(out);
}

std::string series_table(const SubsaecularSeries& s, long n) {
    std::ostringstream os;
    for (size_t i = 0; i < s.steps.size(); ++i)
        os << std::left << std::setw(6) << i + 1 << std::setw(12)
           << interval_str(s.steps[i].support, n) << shape_str(s.steps[i].shape) << "\n";
    return os.str();
}

std::string type_b_json(const TypeBPd& pd, long n) {
    json pts = json::array();
    for (const auto& [itv, v] : pd.entries) {
        json e;
        e["interval"] = interval_val(itv, n);
        e["multiplicity"] = jh_json(v);
        pts.push_back(std::move(e));
    }
    json out;
    out["points"] = pts;
    return dump(out);
}

std::string type_b_table(const TypeBPd& pd, long n) {
    std::ostringstream os;
    for (const auto& [itv, v] : pd.entries) {
        os << std::left << std::setw(12) << interval_str(itv, n);
        if (v.free_rank != 0) os << " free^" << v.free_rank;
        for (const auto& [p, m] : v.torsion)
            if (m != 0) os << " (" << p << ")^" << m;
        os << "\n";
    }
    if (pd.entries.empty()) os << "(empty diagram)\n";
    return os.str();
}

std::string homology_barcode_json(const HomologyBarcode& bc, long n) {
    json bars = json::array();
    for (const auto& [itv, b] : bc) {
        json e;
        e["interval"] = interval_val(itv, n);
        e["shape"] = shape_json(b.shape);
        json reps = json::array();
        for (const auto& r : b.reps) {
            json one = json::array();
            for (const auto& [id, c] : r) {
                json pair = json::array();
                pair.push_back(id);
                pair.push_back(int_json(c));
                one.push_back(std::move(pair));
            }
            reps.push_back(std::move(one));
        }
        e["representatives"] = reps;
        bars.push_back(std::move(e));
    }
    json out;
    out["bars"] = bars;
    return dump(out);
}

std::string homology_barcode_table(const HomologyBarcode& bc, long n) {
    std::ostringstream os;
    for (const auto& [itv, b] : bc) {
        os << std::left << std::setw(12) << interval_str(itv, n) << std::setw(14)
           << shape_str(b.shape) << " reps:";
        for (const auto& r : b.reps) os << "  " << sparse_str(r);
        os << "\n";
    }
    if (bc.empty()) os << "(empty barcode)\n";
    return os.str();
}

std::string spectral_json(const std::vector<SpectralTerm>& page) {
    json terms = json::array();
    for (const auto& t : page) {
        json e;
        e["p"] = t.p;
        e["q"] = t.q;
        e["r"] = t.r;
        e["z"] = shape_json(t.z_shape);
        e["b"] = shape_json(t.b_shape);
        e["e"] = shape_json(t.e_shape);
        terms.push_back(std::move(e));
    }
    json out;
    out["terms"] = terms;
    return dump(out);
}

std::string spectral_table(const std::vector<SpectralTerm>& page) {
    std::ostringstream os;
    os << std::left << std::setw(5) << "p" << std::setw(5) << "q" << std::setw(5) << "r"
       << std::setw(16) << "z" << std::setw(16) << "b" << "e\n";
    for (const auto& t : page)
        os << std::left << std::setw(5) << t.p << std::setw(5) << t.q << std::setw(5) << t.r
           << std::setw(16) << shape_str(t.z_shape) << std::setw(16) << shape_str(t.b_shape)
           << shape_str(t.e_shape) << "\n";
    return os.str();
}

std::string ls_report_json(const LsReport& r) {
    json ms = json::array();
    for (const auto& m : r.mismatches) {
        json e;
        e["p"] = m.p;
        e["q"] = m.q;
        e["r"] = m.r;
        e["which"] = m.which;
        e["detail"] = m.detail;
        ms.push_back(std::move(e));
    }
    json out;
    out["ok"] = r.ok;
    out["checked"] = r.checked;
    out["mismatches"] = ms;
    return dump(out);
}

std::string ls_report_table(const LsReport& r) {
    std::ostringstream os;
    os << (r.ok ? "ok" : "MISMATCH") << " (" << r.checked << " comparisons)\n";
    for (const auto& m : r.mismatches) os << "  " << m.detail << "\n";
    return os.str();
}

std::string coset_barcode_json(const std::map<Interval, CosetFactor>& bc, long n) {
    json bars = json::array();
    for (const auto& [itv, f] : bc) {
        json e;
        e["interval"] = interval_val(itv, n);
        e["natural"] = f.natural;
        e["interval_ok"] = f.interval_ok;
        e["den_normal"] = f.den_normal;
        e["sizes"] = f.sizes;
        e["coset_reps"] = f.coset_reps;
        e["induced"] = f.induced;
        bars.push_back(std::move(e));
    }
    json out;
    out["bars"] = bars;
    return dump(out);
}

std::string coset_barcode_table(const std::map<Interval, CosetFactor>& bc, long n) {
    std::ostringstream os;
    for (const auto& [itv, f] : bc) {
        os << std::left << std::setw(12) << interval_str(itv, n) << "cosets:";
        for (long s : f.sizes) os << " " << s;
        os << (f.natural ? "" : "  [not natural]") << (f.interval_ok ? "" : "  [not an interval]")
           << (f.den_normal ? "  [normal]" : "") << "\n";
    }
    if (bc.empty()) os << "(empty barcode)\n";
    return os.str();
}

std::string normalized_barcode_json(const std::map<Interval, NormalizedFactor>& bc, long n) {
    json bars = json::array();
    for (const auto& [itv, f] : bc) {
        json e;
        e["interval"] = interval_val(itv, n);
        e["natural"] = f.natural;
        e["interval_ok"] = f.interval_ok;
        e["orders"] = f.orders;
        json qs = json::array();
        for (const auto& g : f.quotients) qs.push_back(g->table);
        e["quotients"] = qs;
        e["induced"] = f.induced;
        bars.push_back(std::move(e));
    }
    json out;
    out["bars"] = bars;
    return dump(out);
}

std::string normalized_barcode_table(const std::map<Interval, NormalizedFactor>& bc, long n) {
    std::ostringstream os;
    for (const auto& [itv, f] : bc) {
        os << std::left << std::setw(12) << interval_str(itv, n) << "orders:";
        for (long s : f.orders) os << " " << s;
        os << (f.natural ? "" : "  [not natural]") << (f.interval_ok ? "" : "  [not an interval]")
           << "\n";
    }
    if (bc.empty()) os << "(empty barcode)\n";
    return os.str();
}

std::string lattice_summary_json(const GSaecular& g) {
    json out;
    auto sizes = [](const std::vector<GSubDiagram>& v) {
        json a = json::array();
        for (const auto& s : v) {
            json row = json::array();
            for (const auto& part : s.parts) row.push_back(part.size());
            a.push_back(std::move(row));
        }
        return a;
    };
    out["image_filtration_sizes"] = sizes(g.khat);
    out["kernel_filtration_sizes"] = sizes(g.k);
    out["lattice_size"] = g.distributivity.lattice_size;
    out["distributive"] = g.distributivity.ok;
    out["triples_checked"] = g.distributivity.triples_checked;
    out["detail"] = g.distributivity.detail;
    return dump(out);
}

std::string lattice_summary_table(const GSaecular& g) {
    std::ostringstream os;
    os << "lattice size " << g.distributivity.lattice_size << ", "
       << (g.distributivity.ok ? "distributive" : "NOT distributive") << " ("
       << g.distributivity.triples_checked << " triples)\n";
    auto line = [&](const char* name, const std::vector<GSubDiagram>& v) {
        for (size_t i = 0; i < v.size(); ++i) {
            os << name << "[" << i + 1 << "]:";
            for (const auto& part : v[i].parts) os << " " << part.size();
            os << "\n";
        }
    };
    line("image", g.khat);
    line("kernel", g.k);
    if (!g.distributivity.ok) os << g.distributivity.detail << "\n";
    return os.str();
}

} // namespace saecula
