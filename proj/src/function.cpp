#include "lanfa/function.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace lanfa {

namespace {

std::string compact(const Real& x) {
    if (x == boost::multiprecision::round(x) && boost::multiprecision::abs(x) < Real(1e15)) {
        return std::to_string(x.convert_to<long long>());
    }
    return to_string(x, 25);
}

std::string list_text(const std::vector<Real>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += compact(xs[i]);
    }
    return s + "]";
}

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

// Splits "a=1,b=[2,3]" on `sep` outside brackets.
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == sep && depth == 0) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) parts.push_back(trim(cur));
    return parts;
}

std::map<std::string, std::string> parse_params(const std::string& s, char sep, const std::string& context) {
    std::map<std::string, std::string> out;
    for (const auto& part : split_top(s, sep)) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigError(context + ": expected key=value, got '" + part + "'");
        out[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
    }
    return out;
}

Real parse_real(const std::string& s, const std::string& context) {
    try {
        return real_from_string(trim(s));
    } catch (const Error&) {
        throw ConfigError(context + ": not a number: '" + s + "'");
    }
}

}  // namespace

Real Polynomial::operator()(const Real& x) const {
    Real acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

std::size_t Polynomial::degree() const {
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] != 0) return i;
    }
    return 0;
}

RationalFunction::RationalFunction(std::vector<Real> numer, std::vector<Real> poles, std::vector<Complex> pairs)
    : numer_{std::move(numer)}, poles_(std::move(poles)), pairs_(std::move(pairs)) {
    if (numer_.coeffs.empty()) numer_.coeffs.push_back(Real(0));
    for (auto& z : pairs_) {
        if (z.im == 0) throw DomainError("conjugate pair with zero imaginary part; list it as a real pole");
        if (z.im < 0) z = z.conj();
    }
}

std::vector<Complex> RationalFunction::all_poles() const {
    std::vector<Complex> out;
    for (const auto& z : poles_) out.emplace_back(z, Real(0));
    for (const auto& z : pairs_) {
        out.push_back(z);
        out.push_back(z.conj());
    }
    return out;
}

Real RationalFunction::denominator(const Real& x) const {
    Real m(1);
    for (const auto& z : poles_) m *= x - z;
    for (const auto& z : pairs_) m *= (x - z.re) * (x - z.re) + z.im * z.im;
    return m;
}

Real RationalFunction::operator()(const Real& x) const {
    Real m = denominator(x);
    if (m == 0) throw DomainError("rational function evaluated at a pole x = " + to_string(x, 17));
    return numer_(x) / m;
}

void RationalFunction::require_real_poles(const char* what) const {
    if (has_complex_poles()) throw DomainError(std::string(what) + " requires real poles");
}

Real RationalFunction::partial_denominator(std::size_t i, std::size_t j, const Real& x) const {
    require_real_poles("partial_denominator");
    if (i < 1 || j > poles_.size() || i > j + 1) throw ParameterError("partial_denominator: bad index range");
    Real m(1);
    for (std::size_t l = i; l <= j; ++l) m *= x - poles_[l - 1];
    return m;
}

RationalFunction RationalFunction::leading(std::size_t j) const {
    require_real_poles("leading");
    if (j > poles_.size()) throw ParameterError("leading: j exceeds the number of poles");
    return RationalFunction(numer_.coeffs, std::vector<Real>(poles_.begin(), poles_.begin() + static_cast<std::ptrdiff_t>(j)));
}

RationalFunction RationalFunction::scaled_argument(const Real& s) const {
    if (s == 0) throw ParameterError("scaled_argument: zero scale");
    const auto q = static_cast<long>(denominator_degree());
    Real sq = boost::multiprecision::pow(s, Real(q));
    std::vector<Real> numer = numer_.coeffs;
    Real si(1);
    for (auto& c : numer) {
        c = c * si / sq;
        si *= s;
    }
    std::vector<Real> poles;
    for (const auto& z : poles_) poles.push_back(z / s);
    std::vector<Complex> pairs;
    for (const auto& z : pairs_) pairs.push_back(Complex(z.re / s, z.im / s));
    return RationalFunction(std::move(numer), std::move(poles), std::move(pairs));
}

ScalarFunction::ScalarFunction(Variant v) : v_(std::move(v)) {
    if (auto* p = std::get_if<fn::InvPower>(&v_); p && p->q < 1) throw ParameterError("inv_power needs q >= 1");
    if (auto* e = std::get_if<fn::ExpScaled>(&v_); e && e->sign != 1 && e->sign != -1) {
        throw ParameterError("exp sign must be +1 or -1");
    }
}

std::optional<RationalFunction> ScalarFunction::as_rational() const {
    if (auto* p = std::get_if<fn::Poly>(&v_)) return RationalFunction(p->p.coeffs, {});
    if (auto* r = std::get_if<fn::Rational>(&v_)) return r->r;
    if (auto* ip = std::get_if<fn::InvPower>(&v_)) return RationalFunction({Real(1)}, std::vector<Real>(ip->q, Real(0)));
    return std::nullopt;
}

bool ScalarFunction::is_polynomial() const {
    if (std::holds_alternative<fn::Poly>(v_)) return true;
    if (auto* r = std::get_if<fn::Rational>(&v_)) return r->r.denominator_degree() == 0;
    return false;
}

std::string ScalarFunction::text() const {
    struct Visitor {
        std::string operator()(const fn::Poly& p) const { return "poly:coeffs=" + list_text(p.p.coeffs); }
        std::string operator()(const fn::Rational& r) const {
            std::string s = "rational:numer=" + list_text(r.r.numer().coeffs) + ";poles=" + list_text(r.r.poles());
            if (r.r.has_complex_poles()) {
                std::vector<Real> flat;
                for (const auto& z : r.r.conjugate_pairs()) {
                    flat.push_back(z.re);
                    flat.push_back(z.im);
                }
                s += ";pairs=" + list_text(flat);
            }
            return s;
        }
        std::string operator()(const fn::Sqrt&) const { return "sqrt"; }
        std::string operator()(const fn::InvSqrt&) const { return "inv_sqrt"; }
        std::string operator()(const fn::InvPower& p) const { return "inv_power:" + std::to_string(p.q); }
        std::string operator()(const fn::ExpScaled& e) const {
            return "exp:t=" + compact(e.t) + ",sign=" + std::to_string(e.sign);
        }
        std::string operator()(const fn::Sign&) const { return "sign"; }
    };
    return std::visit(Visitor{}, v_);
}

Real eval_scalar(const ScalarFunction& f, const Real& x) {
    auto domain = [&](const char* name) {
        return DomainError(std::string(name) + " is undefined at x = " + to_string(x, 17));
    };
    struct Visitor {
        const Real& x;
        decltype(domain)& fail;
        Real operator()(const fn::Poly& p) const { return p.p(x); }
        Real operator()(const fn::Rational& r) const { return r.r(x); }
        Real operator()(const fn::Sqrt&) const {
            if (x < 0) throw fail("sqrt");
            return boost::multiprecision::sqrt(x);
        }
        Real operator()(const fn::InvSqrt&) const {
            if (!(x > 0)) throw fail("inv_sqrt");
            return 1 / boost::multiprecision::sqrt(x);
        }
        Real operator()(const fn::InvPower& p) const {
            if (x == 0) throw fail("inv_power");
            return 1 / boost::multiprecision::pow(x, Real(p.q));
        }
        Real operator()(const fn::ExpScaled& e) const { return boost::multiprecision::exp(e.sign * e.t * x); }
        Real operator()(const fn::Sign&) const {
            if (x == 0) throw fail("sign");
            return x > 0 ? Real(1) : Real(-1);
        }
    };
    return std::visit(Visitor{x, domain}, f.variant());
}

std::vector<Real> parse_real_list(const std::string& text) {
    std::string s = trim(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw ConfigError("expected a bracketed list like [1,2], got '" + text + "'");
    }
    std::vector<Real> out;
    for (const auto& part : split_top(s.substr(1, s.size() - 2), ',')) out.push_back(parse_real(part, "list"));
    return out;
}

ScalarFunction parse_scalar_function(const std::string& raw) {
    const std::string text = trim(raw);
    const auto colon = text.find(':');
    const std::string name = colon == std::string::npos ? text : text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    const std::string ctx = "function '" + text + "'";

    if (name == "sqrt") return ScalarFunction::sqrt();
    if (name == "inv_sqrt") return ScalarFunction::inv_sqrt();
    if (name == "sign") return ScalarFunction::sign();
    if (name == "inv_power") {
        Real q = parse_real(rest, ctx);
        if (q < 1 || q != boost::multiprecision::round(q)) throw ConfigError(ctx + ": q must be a positive integer");
        return ScalarFunction::inv_power(q.convert_to<unsigned>());
    }
    if (name == "exp") {
        auto params = parse_params(rest, ',', ctx);
        Real t = params.count("t") ? parse_real(params["t"], ctx) : Real(1);
        int sign = params.count("sign") ? parse_real(params["sign"], ctx).convert_to<int>() : 1;
        if (sign != 1 && sign != -1) throw ConfigError(ctx + ": sign must be 1 or -1");
        return ScalarFunction::exp_scaled(t, sign);
    }
    if (name == "poly") {
        auto params = parse_params(rest, ';', ctx);
        if (!params.count("coeffs")) throw ConfigError(ctx + ": missing coeffs=[...]");
        return ScalarFunction::polynomial(parse_real_list(params["coeffs"]));
    }
    if (name == "rational") {
        auto params = parse_params(rest, ';', ctx);
        if (!params.count("numer")) throw ConfigError(ctx + ": missing numer=[...]");
        auto numer = parse_real_list(params["numer"]);
        std::vector<Real> poles = params.count("poles") ? parse_real_list(params["poles"]) : std::vector<Real>{};
        std::vector<Complex> pairs;
        if (params.count("pairs")) {
            auto flat = parse_real_list(params["pairs"]);
            if (flat.size() % 2 != 0) throw ConfigError(ctx + ": pairs must list re,im values");
            for (std::size_t i = 0; i < flat.size(); i += 2) pairs.emplace_back(flat[i], flat[i + 1]);
        }
        try {
            return ScalarFunction::rational(RationalFunction(std::move(numer), std::move(poles), std::move(pairs)));
        } catch (const DomainError& e) {
            throw ConfigError(ctx + ": " + e.what());
        }
    }
    throw ConfigError("unknown function '" + name + "' in " + ctx);
}

}  // namespace lanfa
