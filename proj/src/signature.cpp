#include "pgonal/signature.hpp"

#include <cctype>
#include <sstream>

namespace pgonal {

bool is_odd_prime(int p) {
    if (p < 3 || p % 2 == 0) return false;
    for (int d = 3; static_cast<long long>(d) * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

std::string GeneratorRef::name() const {
    switch (kind) {
        case GenKind::Elliptic: return "x" + std::to_string(i);
        case GenKind::Connector: return "e" + std::to_string(i);
        case GenKind::Reflection: return "c" + std::to_string(i) + "," + std::to_string(j);
        case GenKind::HyperbolicA: return "a" + std::to_string(i);
        case GenKind::HyperbolicB: return "b" + std::to_string(i);
        case GenKind::Glide: return "d" + std::to_string(i);
    }
    return "?";
}

std::string word_name(const Word& w) {
    std::string out;
    for (const Letter& l : w) {
        if (!out.empty()) out += " ";
        out += l.gen.name();
        if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
    }
    return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Cursor {
public:
    explicit Cursor(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of signature", pos_);
        return s_[pos_];
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }
    void expect(char c) {
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }
    bool accept(char c) {
        if (!at_end() && peek() == c) { ++pos_; return true; }
        return false;
    }
    long long integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected an integer", pos_);
        return std::stoll(s_.substr(start, pos_ - start));
    }
    size_t pos() const { return pos_; }

private:
    const std::string& s_;
    size_t pos_ = 0;
};

int parse_period(Cursor& c) {
    size_t at = c.pos();
    long long v = c.integer();
    if (v < 2) throw ParseError("period below 2", at);
    if (v > INT32_MAX) throw ParseError("period out of range", at);
    return static_cast<int>(v);
}

// "[" ( "-" | int ("," int)* ) "]"
std::vector<int> parse_period_list(Cursor& c) {
    std::vector<int> out;
    c.expect('[');
    if (c.accept('-')) { c.expect(']'); return out; }
    out.push_back(parse_period(c));
    while (c.accept(',')) out.push_back(parse_period(c));
    c.expect(']');
    return out;
}

// "(" ( "-" | int ("," int)* ) ")"
std::vector<int> parse_cycle(Cursor& c) {
    std::vector<int> out;
    c.expect('(');
    if (c.accept('-')) { c.expect(')'); return out; }
    out.push_back(parse_period(c));
    while (c.accept(',')) out.push_back(parse_period(c));
    c.expect(')');
    return out;
}

} // namespace

NecSignature parse_signature(const std::string& text) {
    Cursor c(text);
    NecSignature sig;
    c.expect('(');
    long long g = c.integer();
    if (g > INT32_MAX) throw ParseError("genus out of range", c.pos());
    sig.genus = static_cast<int>(g);
    c.expect(',');

    bool explicit_sign = false;
    if (c.peek() == '+' || c.peek() == '-') {
        // "-" could open the period list "[-]" only after '['; here it is a sign
        explicit_sign = true;
        sig.orientable = (c.peek() == '+');
        c.accept(sig.orientable ? '+' : '-');
        c.expect(',');
    }
    sig.proper_periods = parse_period_list(c);

    if (c.accept(',')) {
        c.expect('{');
        sig.period_cycles.push_back(parse_cycle(c));
        while (c.accept(',')) sig.period_cycles.push_back(parse_cycle(c));
        c.expect('}');
    }
    c.expect(')');
    if (!c.at_end()) throw ParseError("trailing input after signature", c.pos());

    if (!explicit_sign && !sig.period_cycles.empty())
        throw ParseError("signature with period cycles requires an explicit sign", 0);
    return sig;
}

std::string format_signature(const NecSignature& sig) {
    std::ostringstream os;
    os << "(" << sig.genus << ",";
    bool fuchsian_form = sig.orientable && sig.period_cycles.empty();
    if (!fuchsian_form) os << (sig.orientable ? "+" : "-") << ",";
    os << "[";
    if (sig.proper_periods.empty()) {
        os << "-";
    } else {
        for (size_t i = 0; i < sig.proper_periods.size(); ++i)
            os << (i ? "," : "") << sig.proper_periods[i];
    }
    os << "]";
    if (!sig.period_cycles.empty()) {
        os << ",{";
        for (size_t i = 0; i < sig.period_cycles.size(); ++i) {
            if (i) os << ",";
            os << "(";
            const auto& cyc = sig.period_cycles[i];
            if (cyc.empty()) {
                os << "-";
            } else {
                for (size_t j = 0; j < cyc.size(); ++j) os << (j ? "," : "") << cyc[j];
            }
            os << ")";
        }
        os << "}";
    }
    os << ")";
    return os.str();
}

ExactArea area(const NecSignature& sig) {
    int eps = sig.orientable ? 2 : 1;
    Rational total(static_cast<long long>(eps) * sig.genus - 2 + sig.cycle_count());
    for (int m : sig.proper_periods) total = total + (Rational(1) - Rational(1, m));
    for (const auto& cyc : sig.period_cycles)
        for (int n : cyc) total = total + Rational(1, 2) * (Rational(1) - Rational(1, n));
    return ExactArea{total};
}

std::vector<Violation> validate(const NecSignature& sig) {
    std::vector<Violation> out;
    if (sig.genus < 0) out.push_back({"negative_genus", "genus " + std::to_string(sig.genus)});
    for (size_t i = 0; i < sig.proper_periods.size(); ++i)
        if (sig.proper_periods[i] < 2)
            out.push_back({"period_below_two",
                           "proper period m_" + std::to_string(i + 1) + " = " +
                               std::to_string(sig.proper_periods[i])});
    for (size_t i = 0; i < sig.period_cycles.size(); ++i)
        for (size_t j = 0; j < sig.period_cycles[i].size(); ++j)
            if (sig.period_cycles[i][j] < 2)
                out.push_back({"period_below_two",
                               "link period n_" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + " = " +
                                   std::to_string(sig.period_cycles[i][j])});
    if (out.empty() && !(area(sig).value > Rational(0)))
        out.push_back({"nonpositive_area", "normalised area " + area(sig).value.str()});
    return out;
}

CanonicalPresentation canonical_presentation(const NecSignature& sig) {
    CanonicalPresentation pres;
    const int r = static_cast<int>(sig.proper_periods.size());
    const int k = sig.cycle_count();

    for (int i = 1; i <= r; ++i) pres.generators.push_back({GenKind::Elliptic, i, 0});
    for (int i = 1; i <= k; ++i) pres.generators.push_back({GenKind::Connector, i, 0});
    for (int i = 1; i <= k; ++i) {
        int s = static_cast<int>(sig.period_cycles[i - 1].size());
        for (int j = 0; j <= s; ++j) pres.generators.push_back({GenKind::Reflection, i, j});
    }
    if (sig.orientable) {
        for (int i = 1; i <= sig.genus; ++i) {
            pres.generators.push_back({GenKind::HyperbolicA, i, 0});
            pres.generators.push_back({GenKind::HyperbolicB, i, 0});
        }
    } else {
        for (int i = 1; i <= sig.genus; ++i) pres.generators.push_back({GenKind::Glide, i, 0});
    }

    for (int i = 1; i <= r; ++i)
        pres.relators.push_back({{{GenKind::Elliptic, i, 0}, sig.proper_periods[i - 1]}});
    for (int i = 1; i <= k; ++i) {
        const auto& cyc = sig.period_cycles[i - 1];
        int s = static_cast<int>(cyc.size());
        for (int j = 0; j <= s; ++j)
            pres.relators.push_back({{{GenKind::Reflection, i, j}, 2}});
        for (int j = 1; j <= s; ++j) {
            Word w;
            for (int rep = 0; rep < cyc[j - 1]; ++rep) {
                w.push_back({{GenKind::Reflection, i, j - 1}, 1});
                w.push_back({{GenKind::Reflection, i, j}, 1});
            }
            pres.relators.push_back(std::move(w));
        }
        pres.relators.push_back({{{GenKind::Reflection, i, 0}, 1},
                                 {{GenKind::Connector, i, 0}, -1},
                                 {{GenKind::Reflection, i, s}, 1},
                                 {{GenKind::Connector, i, 0}, 1}});
    }

    Word long_rel;
    for (int i = 1; i <= r; ++i) long_rel.push_back({{GenKind::Elliptic, i, 0}, 1});
    for (int i = 1; i <= k; ++i) long_rel.push_back({{GenKind::Connector, i, 0}, 1});
    if (sig.orientable) {
        for (int i = 1; i <= sig.genus; ++i) {
            long_rel.push_back({{GenKind::HyperbolicA, i, 0}, 1});
            long_rel.push_back({{GenKind::HyperbolicB, i, 0}, 1});
            long_rel.push_back({{GenKind::HyperbolicA, i, 0}, -1});
            long_rel.push_back({{GenKind::HyperbolicB, i, 0}, -1});
        }
    } else {
        for (int i = 1; i <= sig.genus; ++i) long_rel.push_back({{GenKind::Glide, i, 0}, 2});
    }
    pres.relators.push_back(std::move(long_rel));
    return pres;
}

Rational rh_index(const ExactArea& sub, const ExactArea& super) {
    if (!(super.value > Rational(0)))
        throw std::domain_error("index undefined: supergroup area is not positive");
    return sub.value / super.value;
}

NecSignature cyclic_p_gonal_signature(int p, long long genus) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    if (genus < 2) throw std::domain_error("genus must be at least 2");
    if ((2 * genus) % (p - 1) != 0)
        throw std::domain_error("no such signature: (p-1) does not divide 2g");
    long long u = 2 * genus / (p - 1) + 2;
    NecSignature sig;
    sig.orientable = true;
    sig.genus = 0;
    sig.proper_periods.assign(static_cast<size_t>(u), p);
    return sig;
}

std::vector<TaggedSignature> real_cyclic_signatures(int p, long long genus) {
    if (!is_odd_prime(p)) throw std::domain_error("p must be an odd prime");
    std::vector<TaggedSignature> out;
    // (0,+,[p^u],{(p^v)}) with (p-1)(2u+v-2) = 2g, v >= 1.
    if ((2 * genus) % (p - 1) == 0) {
        long long total = 2 * genus / (p - 1) + 2; // 2u + v
        for (long long u = 0; 2 * u < total; ++u) {
            long long v = total - 2 * u;
            if (v < 1) break;
            NecSignature sig;
            sig.orientable = true;
            sig.genus = 0;
            sig.proper_periods.assign(static_cast<size_t>(u), p);
            sig.period_cycles.push_back(std::vector<int>(static_cast<size_t>(v), p));
            out.push_back({std::move(sig), TargetFamily::DpOrC2p});
        }
    }
    // (0,+,[p^u],{(-)}) with (p-1)(u-1) = g; forces g even.
    if (genus % 2 == 0 && genus % (p - 1) == 0) {
        long long u = genus / (p - 1) + 1;
        NecSignature sig;
        sig.orientable = true;
        sig.genus = 0;
        sig.proper_periods.assign(static_cast<size_t>(u), p);
        sig.period_cycles.push_back({});
        out.push_back({std::move(sig), TargetFamily::C2pOnly});
    }
    return out;
}

long long kernel_surface_genus(const NecSignature& sig, long long group_order) {
    ExactArea a = area(sig);
    if (!(a.value > Rational(0)))
        throw std::domain_error("kernel genus undefined: signature has non-positive area");
    if (group_order <= 0) throw std::domain_error("group order must be positive");
    Rational twice_g = Rational(group_order) * a.value + Rational(2);
    if (!twice_g.is_integer() || twice_g.num() % 2 != 0 || twice_g.num() < 0)
        throw std::domain_error("no surface kernel of that index: genus would be " +
                                (twice_g / Rational(2)).str());
    return twice_g.num() / 2;
}

} // namespace pgonal
