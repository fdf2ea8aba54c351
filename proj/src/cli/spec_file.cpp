#include "rlc/cli/spec_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "rlc/expr/parse.hpp"

namespace rlc {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

// section -> key -> entry; "" is the top level
using Raw = std::map<std::string, std::map<std::string, Entry>>;

[[noreturn]] void fail(int line, const std::string& what) {
    throw SpecFileError("line " + std::to_string(line) + ": " + what);
}

const std::map<std::string, std::vector<std::string>> allowed_keys = {
    {"", {"name", "dim", "coords", "tau", "tau_unit", "seed", "kind"}},
    {"warped", {"f"}},
};

bool open_section(const std::string& s) {
    return s == "metric" || s == "base" || s == "functions" || s == "box";
}

Raw read_raw(const std::string& text) {
    Raw raw;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        boost::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(n, "unterminated section header");
            section = boost::trim_copy(line.substr(1, line.size() - 2));
            if (!open_section(section) && !allowed_keys.count(section)) fail(n, "unknown section [" + section + "]");
            if (raw.count(section)) fail(n, "section [" + section + "] repeated");
            raw[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(n, "expected key = value");
        std::string key = boost::trim_copy(line.substr(0, eq));
        std::string value = boost::trim_copy(line.substr(eq + 1));
        if (key.empty()) fail(n, "empty key");
        if (const auto it = allowed_keys.find(section); it != allowed_keys.end()) {
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                fail(n, "unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
        }
        if (key.find_first_of(" \t") != std::string::npos && section != "metric" && section != "base")
            fail(n, "key contains whitespace");
        boost::erase_all(key, " ");
        if (raw[section].count(key)) fail(n, "duplicate key '" + key + "'");
        raw[section][key] = {value, n};
    }
    return raw;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    boost::split(out, s, boost::is_any_of(" \t,"), boost::token_compress_on);
    out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
    return out;
}

template <class T>
T number(const Entry& e, const std::string& what) {
    T v{};
    const char* end = e.value.data() + e.value.size();
    const auto r = std::from_chars(e.value.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end) fail(e.line, what + " is not a number: '" + e.value + "'");
    return v;
}

mpq_class rational(const std::string& s, int line) {
    try {
        mpq_class q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        fail(line, "not a rational number: '" + s + "'");
    }
}

std::pair<std::size_t, std::size_t> component_key(const std::string& key, int line, std::size_t n) {
    std::size_t a = 0, b = 0;
    char close = 0;
    std::istringstream in(key);
    if (!(in.get() == 'g' && in.get() == '(' && in >> a && in.get() == ',' && in >> b && in.get(close) && close == ')') ||
        in.peek() != std::char_traits<char>::eof())
        fail(line, "component key must look like g(1,2), got '" + key + "'");
    if (a < 1 || b < 1 || a > n || b > n) fail(line, "component index out of range in '" + key + "'");
    if (a > b) fail(line, "give the upper triangle only, got '" + key + "'");
    return {a - 1, b - 1};
}

Expr expression(const Entry& e, const ParseContext& ctx) {
    try {
        return parse_expr(e.value, ctx);
    } catch (const ExprError& err) {
        fail(e.line, err.what());
    }
}

ExprMatrix read_matrix(const std::map<std::string, Entry>& section, std::size_t n, const ParseContext& ctx) {
    ExprMatrix g(n, std::vector<Expr>(n));
    for (const auto& [key, e] : section) {
        const auto [a, b] = component_key(key, e.line, n);
        g[a][b] = g[b][a] = expression(e, ctx);
    }
    return g;
}

std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

MetricSpecFile parse_spec_file(const std::string& text) {
    const Raw raw = read_raw(text);
    MetricSpecFile s;
    const auto& top = raw.count("") ? raw.at("") : std::map<std::string, Entry>{};
    auto get = [&](const std::string& k) -> const Entry* {
        const auto it = top.find(k);
        return it == top.end() ? nullptr : &it->second;
    };

    if (const auto* e = get("name")) s.name = e->value;
    const Entry* coords = get("coords");
    if (!coords) throw SpecFileError("missing key 'coords'");
    s.coords = words(coords->value);
    if (s.coords.empty()) fail(coords->line, "no coordinates");
    for (std::size_t i = 0; i < s.coords.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (s.coords[i] == s.coords[j]) fail(coords->line, "coordinate '" + s.coords[i] + "' repeated");
    if (const auto* e = get("dim"); e && number<std::size_t>(*e, "dim") != s.coords.size())
        fail(e->line, "dim does not match the number of coordinates");
    if (const auto* e = get("seed")) s.seed = number<std::uint64_t>(*e, "seed");

    if (const auto* e = get("kind")) {
        if (e->value != "warped") fail(e->line, "unknown kind '" + e->value + "'");
        s.warped = true;
    }
    if (const auto* e = get("tau")) {
        if (std::find(s.coords.begin(), s.coords.end(), e->value) == s.coords.end())
            fail(e->line, "tau names no coordinate");
        if (s.warped) fail(e->line, "a warped product fixes tau = -t");
        s.tau = e->value == s.coords.back() ? "" : e->value;
    }

    ParseContext ctx;
    ctx.coordinates = s.coords;
    if (raw.count("functions"))
        for (const auto& [name, e] : raw.at("functions")) {
            std::vector<mpq_class> jet;
            for (const auto& w : words(e.value)) jet.push_back(rational(w, e.line));
            s.functions[name] = jet;
            ctx.functions.insert(name);
            ctx.declared[name] = jet;
        }
    if (raw.count("box"))
        for (const auto& [name, e] : raw.at("box")) {
            if (std::find(s.coords.begin(), s.coords.end(), name) == s.coords.end())
                fail(e.line, "box names no coordinate: '" + name + "'");
            const auto w = words(e.value);
            if (w.size() != 2) fail(e.line, "box needs two bounds");
            const double lo = number<double>({w[0], e.line}, "bound"), hi = number<double>({w[1], e.line}, "bound");
            if (!(lo < hi)) fail(e.line, "empty box range");
            s.box[name] = {lo, hi};
        }
    if (const auto* e = get("tau_unit")) {
        if (s.warped) fail(e->line, "a warped product fixes tau = -t");
        s.tau_unit = expression(*e, ctx);
    }

    if (s.warped) {
        if (raw.count("metric")) throw SpecFileError("a warped product takes [base], not [metric]");
        if (!raw.count("warped") || !raw.at("warped").count("f")) throw SpecFileError("missing [warped] f");
        if (!raw.count("base")) throw SpecFileError("missing [base]");
        s.warping = expression(raw.at("warped").at("f"), ctx);
        s.metric = read_matrix(raw.at("base"), s.dim() - 1, ctx);
    } else {
        if (raw.count("warped") || raw.count("base")) throw SpecFileError("[warped] and [base] need kind = warped");
        if (!raw.count("metric")) throw SpecFileError("missing [metric]");
        s.metric = read_matrix(raw.at("metric"), s.dim(), ctx);
    }
    return s;
}

MetricSpecFile load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecFileError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_file(buf.str());
}

std::string format_spec_file(const MetricSpecFile& s) {
    std::ostringstream out;
    if (!s.name.empty()) out << "name = " << s.name << '\n';
    if (s.warped) out << "kind = warped\n";
    out << "dim = " << s.dim() << '\n' << "coords = " << boost::join(s.coords, " ") << '\n';
    if (!s.tau.empty()) out << "tau = " << s.tau << '\n';
    if (s.tau_unit) out << "tau_unit = " << s.tau_unit->str() << '\n';
    if (s.seed) out << "seed = " << *s.seed << '\n';
    if (s.warped) out << "\n[warped]\nf = " << s.warping->str() << '\n';
    out << (s.warped ? "\n[base]\n" : "\n[metric]\n");
    for (std::size_t a = 0; a < s.metric.size(); ++a)
        for (std::size_t b = a; b < s.metric.size(); ++b)
            if (!s.metric[a][b].is_zero())
                out << "g(" << a + 1 << ',' << b + 1 << ") = " << s.metric[a][b].str() << '\n';
    if (!s.functions.empty()) {
        out << "\n[functions]\n";
        for (const auto& [name, jet] : s.functions) {
            out << name << " =";
            for (std::size_t i = 0; i < jet.size(); ++i) out << (i ? ", " : " ") << jet[i].get_str();
            out << '\n';
        }
    }
    if (!s.box.empty()) {
        out << "\n[box]\n";
        for (const auto& c : s.coords)
            if (const auto it = s.box.find(c); it != s.box.end())
                out << c << " = " << format_double(it->second.first) << ' ' << format_double(it->second.second) << '\n';
    }
    return out.str();
}

ParseContext parse_context(const MetricSpecFile& s) {
    ParseContext ctx;
    ctx.coordinates = s.coords;
    for (const auto& [name, jet] : s.functions) {
        ctx.functions.insert(name);
        ctx.declared[name] = jet;
    }
    return ctx;
}

ChartOptions chart_options(const MetricSpecFile& s, std::optional<std::uint64_t> seed) {
    ChartOptions o;
    o.declared = s.functions;
    o.name = s.name;
    o.seed = seed ? *seed : s.seed.value_or(1);
    if (!s.box.empty())
        for (const auto& c : s.coords) {
            const auto it = s.box.find(c);
            o.box.push_back(it == s.box.end() ? std::pair{-0.5, 0.5} : it->second);
        }
    return o;
}

WarpedSpec to_warped(const MetricSpecFile& s, std::optional<std::uint64_t> seed) {
    if (!s.warped) throw SpecFileError("not a warped product");
    WarpedSpec w;
    w.base_coords.assign(s.coords.begin(), s.coords.end() - 1);
    w.base = s.metric;
    w.t = s.coords.back();
    w.f = *s.warping;
    w.options = chart_options(s, seed);
    return w;
}

MetricChart to_chart(const MetricSpecFile& s, std::optional<std::uint64_t> seed) {
    if (s.warped) return make_warped(to_warped(s, seed));
    const std::string tau = s.tau.empty() ? s.coords.back() : s.tau;
    const auto index = static_cast<std::size_t>(std::find(s.coords.begin(), s.coords.end(), tau) - s.coords.begin());
    return MetricChart(s.coords, s.metric, index, s.tau_unit.value_or(Expr(1)), chart_options(s, seed));
}

}  // namespace rlc
