#include "skewrat/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "skewrat/errors.hpp"

namespace skewrat::io {

using nlohmann::json;

namespace {

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace

mcf::DigitSequence digits_from_json(const std::string& text) {
    json j = json::parse(text);
    mcf::DigitSequence out;
    if (j.contains("prefix"))
        for (const auto& v : j["prefix"]) out.prefix.push_back(v.get<int>());
    if (j.contains("tail")) {
        std::vector<int> tail;
        for (const auto& v : j["tail"]) tail.push_back(v.get<int>());
        out.tail = std::move(tail);
    }
    out.validate();
    return out;
}

std::string digits_to_json(const mcf::DigitSequence& digits) {
    json j;
    j["prefix"] = digits.prefix;
    if (digits.tail) j["tail"] = *digits.tail;
    return j.dump();
}

std::string block_csv(const cocycle::SymbolBlock& block) {
    std::ostringstream out;
    out << "symbol\n";
    for (auto v : block.data) out << v << "\n";
    return out.str();
}

std::string block_rle(const cocycle::SymbolBlock& block) {
    std::ostringstream out;
    bool first = true;
    size_t i = 0;
    while (i < block.data.size()) {
        size_t j = i;
        while (j < block.data.size() && block.data[j] == block.data[i]) ++j;
        if (!first) out << ",";
        out << block.data[i] << "x" << (j - i);
        first = false;
        i = j;
    }
    return out.str();
}

std::string visits_csv(const visits::VisitDistribution& dist) {
    std::ostringstream out;
    out << "nu,count\n";
    for (const auto& [nu, c] : dist.counts) out << nu << "," << c.str() << "\n";
    return out.str();
}

std::string poly_csv(const genfun::LaurentPoly& poly) {
    std::ostringstream out;
    out << "exponent,numerator,denominator\n";
    for (const auto& [e, c] : poly.coefficients())
        out << e << "," << numerator(c).str() << "," << denominator(c).str() << "\n";
    return out.str();
}

std::string law_csv(const genfun::TemporalLaw& law) {
    std::ostringstream out;
    out << "nu,numerator,denominator\n";
    for (const auto& [nu, p] : law.probabilities)
        out << nu << "," << numerator(p).str() << "," << denominator(p).str() << "\n";
    return out.str();
}

std::string eval_trace_csv(const genfun::LaurentPoly& poly, int samples) {
    std::ostringstream out;
    out << "theta,abs\n";
    for (int i = 0; i < samples; ++i) {
        double theta = 2.0 * M_PI * i / samples;
        out << theta << "," << std::abs(poly.eval(theta)) << "\n";
    }
    return out.str();
}

namespace {

json counts_to_json(const visits::VisitDistribution& d) {
    json j;
    j["level"] = d.level;
    j["flavor"] = d.flavor;
    json counts = json::array();
    for (const auto& [nu, c] : d.counts) counts.push_back({nu, c.str()});
    j["counts"] = counts;
    return j;
}

visits::VisitDistribution counts_from_json(const json& j) {
    visits::VisitDistribution d;
    d.level = j["level"].get<int>();
    d.flavor = j["flavor"].get<int>();
    d.kind = visits::VisitDistribution::Kind::raw;
    for (const auto& pair : j["counts"])
        d.counts[pair[0].get<std::int64_t>()] = Int(pair[1].get<std::string>());
    return d;
}

}  // namespace

std::string frame_to_json(const visits::Frame& frame) {
    json j;
    j["U0"] = counts_to_json(frame.U0);
    j["U1"] = counts_to_json(frame.U1);
    j["state"] = {{"level", frame.state.level}, {"l0", frame.state.l0.str()},
                  {"l1", frame.state.l1.str()}, {"eps0", frame.state.eps0},
                  {"eps1", frame.state.eps1},   {"s0", frame.state.s0},
                  {"s1", frame.state.s1},       {"T", frame.state.T}};
    return j.dump();
}

visits::Frame frame_from_json(const std::string& text) {
    json j = json::parse(text);
    visits::Frame f;
    f.U0 = counts_from_json(j["U0"]);
    f.U1 = counts_from_json(j["U1"]);
    const auto& s = j["state"];
    f.state.level = s["level"].get<int>();
    f.state.l0 = Int(s["l0"].get<std::string>());
    f.state.l1 = Int(s["l1"].get<std::string>());
    f.state.eps0 = s["eps0"].get<int>();
    f.state.eps1 = s["eps1"].get<int>();
    f.state.s0 = s["s0"].get<std::int64_t>();
    f.state.s1 = s["s1"].get<std::int64_t>();
    f.state.T = s["T"].get<std::int64_t>();
    return f;
}

std::string rats_to_json(const std::vector<rat::FlipRat>& seq) {
    json out = json::array();
    for (const auto& F : seq) {
        json jr;
        jr["d"] = F.dim();
        json atoms = json::array();
        for (const auto& atom : F.atoms()) {
            json ja;
            json rows = json::array();
            for (int k = 0; k < F.dim(); ++k) {
                json row = json::array();
                for (int l = 0; l < F.dim(); ++l)
                    row.push_back(static_cast<int>(atom.a[static_cast<size_t>(k) * F.dim() + l]));
                rows.push_back(row);
            }
            ja["a"] = rows;
            json b = json::array();
            for (const auto& v : atom.b) b.push_back(rat_string(v));
            ja["b"] = b;
            ja["p"] = rat_string(atom.p);
            atoms.push_back(ja);
        }
        jr["atoms"] = atoms;
        if (F.spec_info()) {
            jr["parity"] = F.spec_info()->parity;
            jr["coefficient"] = F.spec_info()->coefficient;
        }
        out.push_back(jr);
    }
    return out.dump();
}

std::vector<rat::FlipRat> rats_from_json(const std::string& text) {
    json j = json::parse(text);
    std::vector<rat::FlipRat> out;
    for (const auto& jr : j) {
        const int d = jr["d"].get<int>();
        std::vector<rat::Atom> atoms;
        for (const auto& ja : jr["atoms"]) {
            rat::Atom atom;
            for (const auto& row : ja["a"])
                for (const auto& v : row) atom.a.push_back(static_cast<std::int8_t>(v.get<int>()));
            for (const auto& v : ja["b"]) atom.b.push_back(rat_from_string(v.get<std::string>()));
            atom.p = rat_from_string(ja["p"].get<std::string>());
            atoms.push_back(std::move(atom));
        }
        std::optional<rat::SpecInfo> info;
        if (jr.contains("parity"))
            info = rat::SpecInfo{jr["parity"].get<int>(), jr["coefficient"].get<int>()};
        out.emplace_back(d, std::move(atoms), info);
    }
    return out;
}

std::string railways_csv(const std::vector<analysis::RailwaysRow>& rows) {
    std::ostringstream out;
    out << "n,sup,integral_num,integral_den,ratio1,ratio2\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.n << "," << r.sup << "," << numerator(r.integral).str() << ","
            << denominator(r.integral).str() << "," << r.ratio1 << "," << r.ratio2 << "\n";
    return out.str();
}

std::string wrllt_csv(const std::vector<analysis::WrlltRow>& rows) {
    std::ostringstream out;
    out << "k,nu_k,I0,I1,scaled0,scaled1,bound0,bound1\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.k << "," << r.nu_k << "," << r.integral[0] << "," << r.integral[1] << ","
            << r.scaled[0] << "," << r.scaled[1] << "," << r.bound[0] << "," << r.bound[1]
            << "\n";
    return out.str();
}

std::string clt_csv(const std::vector<analysis::CltRow>& rows) {
    std::ostringstream out;
    out << "n,level,mu_hat,c_hat,ks\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.n << "," << r.level << "," << r.mu_hat << "," << r.c_hat << "," << r.ks << "\n";
    return out.str();
}

std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string manifest_json(const std::string& canonical_config, double wall_ms) {
    json j;
    j["config"] = canonical_config;
    j["config_hash"] = config_hash(canonical_config);
    j["version"] = "0.1.0";
    j["wall_ms"] = wall_ms;
    return j.dump(2);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace skewrat::io
