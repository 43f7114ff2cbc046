#ifndef FOL_CERTDOC_HPP
#define FOL_CERTDOC_HPP

// Flat `key: value` text serialization for classification certificates.
// Keys are emitted in a fixed order and every value is rendered through the
// canonical expression printers, so emission is byte-deterministic and
// parse_certificate(emit_certificate(c)) reproduces the certificate.
// A nested certificate (linear pullback recursion) is flattened with a
// `nested.` key prefix. Transcript lines record the outcome of an
// independent verification run and are preserved verbatim on parse.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fol/classifier.hpp"
#include "fol/parse.hpp"

namespace fol {

namespace detail_cert {

inline std::vector<std::string> gen_names(const std::string& stem, int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
  return v;
}

inline std::string join_names(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) {
    if (!s.empty()) s += " ";
    s += x;
  }
  return s;
}

inline std::string point_csv(const std::vector<Rat>& p) {
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += p[i].str();
  }
  return s;
}

// Split a cover-side form into its even and odd plain components.
inline std::pair<DForm<RatFun>, DForm<RatFun>> split_quad(
    const DForm<QuadElem>& w) {
  int n = w.nvars();
  DForm<RatFun> ev(w.deg(), n, RatFun(n)), od(w.deg(), n, RatFun(n));
  for (const auto& [t, c] : w.coeffs()) {
    if (!c.even().is_zero()) ev.add_term(t, c.even());
    if (!c.odd().is_zero()) od.add_term(t, c.odd());
  }
  return {ev, od};
}

inline void emit_into(const Certificate& c, const std::string& prefix,
                      std::string& out) {
  auto put = [&](const std::string& k, const std::string& v) {
    out += prefix + k + ": " + v + "\n";
  };
  put("kind", cert_kind_name(c.kind));
  put("n", std::to_string(c.n));
  if (c.chart >= 0) put("chart", std::to_string(c.chart));
  if (!c.point.empty()) put("point", point_csv(c.point));
  if (c.dir >= 0) put("dir", std::to_string(c.dir));
  if (c.tag > 0) put("case", std::to_string(c.tag));
  if (!c.var_names.empty()) put("vars", join_names(c.var_names));
  if (c.gvs_xvar >= 0) put("gvs-var", std::to_string(c.gvs_xvar));
  if (c.on_cover) {
    put("on-cover", "yes");
    put("cover-gen", c.cover_gen);
    std::string rel = c.cover_gen + "^2 = " + c.cover_re->str(c.var_names);
    if (c.cover_ro && !c.cover_ro->is_zero())
      rel += " + " + c.cover_gen + "*(" + c.cover_ro->str(c.var_names) + ")";
    put("cover-relation", rel);
    put("cover-relation-even", c.cover_re->str(c.var_names));
    if (c.cover_ro && !c.cover_ro->is_zero())
      put("cover-relation-odd", c.cover_ro->str(c.var_names));
  }
  for (size_t k = 0; k < c.w.size(); ++k)
    put("witness-" + std::to_string(k), c.w[k].str(c.var_names));
  for (size_t k = 0; k < c.wq.size(); ++k) {
    auto [ev, od] = split_quad(c.wq[k]);
    put("witness-q" + std::to_string(k) + "-even", ev.str(c.var_names));
    put("witness-q" + std::to_string(k) + "-odd", od.str(c.var_names));
  }
  if (c.alpha5) {
    std::vector<std::string> an = gen_names("x", c.alpha5->nvars());
    put("alpha5-vars", join_names(an));
    put("alpha5", c.alpha5->str(an));
  }
  if (c.factor_f || c.fun_g || c.fun_h || c.fun_u) {
    std::vector<std::string> tn(c.var_names.begin(),
                                c.var_names.end() - 1);
    if (c.factor_f) put("factor-f", c.factor_f->str(tn));
    if (c.fun_g) put("fun-g", c.fun_g->str(tn));
    if (c.fun_h) put("fun-h", c.fun_h->str(tn));
    if (c.fun_u) put("fun-u", c.fun_u->str(tn));
  }
  if (c.psi1) put("psi1", c.psi1->str({"y"}));
  if (!c.note.empty()) put("note", c.note);
  for (const auto& t : c.trail) put("trail", t);
  if (c.nested) emit_into(*c.nested, prefix + "nested.", out);
}

struct KV {
  std::string key, value;
  int line;
};

inline Certificate parse_kvs(const std::vector<KV>& kvs,
                             std::vector<std::string>* transcript) {
  Certificate c;
  std::vector<KV> nested_kvs;
  // Pass 1: structural fields needed to interpret the expression lines.
  for (const auto& kv : kvs) {
    if (kv.key == "vars") c.var_names = detail_parse::split_ws(kv.value);
    else if (kv.key == "n") c.n = std::stoi(kv.value);
  }
  auto coeff = [&](const std::string& s, const std::vector<std::string>& names,
                   int line) { return parse_coeff(s, names, line); };
  std::vector<std::string> tn;
  if (!c.var_names.empty())
    tn.assign(c.var_names.begin(), c.var_names.end() - 1);
  std::shared_ptr<const QuadRing> ring;
  std::vector<std::string> alpha_names;
  std::map<int, std::pair<DForm<RatFun>, DForm<RatFun>>> qparts;
  std::string cover_gen;
  std::optional<RatFun> cover_re, cover_ro;
  for (const auto& kv : kvs) {
    const std::string& k = kv.key;
    const std::string& v = kv.value;
    if (k.rfind("nested.", 0) == 0) {
      nested_kvs.push_back({k.substr(7), v, kv.line});
    } else if (k == "kind") {
      bool found = false;
      for (CertKind kk : {CertKind::FirstIntegralConditional,
                          CertKind::LinearPullback, CertKind::Affine,
                          CertKind::PureProjective, CertKind::FiniteGVS,
                          CertKind::RiccatiPullback, CertKind::Case4NeedsData})
        if (v == cert_kind_name(kk)) {
          c.kind = kk;
          found = true;
        }
      if (!found) throw SyntaxError("unknown certificate kind '" + v + "'",
                                    kv.line, 1);
    } else if (k == "n" || k == "vars") {
      // handled in pass 1
    } else if (k == "chart") {
      c.chart = std::stoi(v);
    } else if (k == "point") {
      c.point = detail_parse::parse_point(v, kv.line);
    } else if (k == "dir") {
      c.dir = std::stoi(v);
    } else if (k == "case") {
      c.tag = std::stoi(v);
    } else if (k == "gvs-var") {
      c.gvs_xvar = std::stoi(v);
    } else if (k == "on-cover") {
      c.on_cover = v == "yes";
    } else if (k == "cover-gen") {
      cover_gen = v;
    } else if (k == "cover-relation") {
      // display line; reconstructed from the -even/-odd machine lines
    } else if (k == "cover-relation-even") {
      cover_re = coeff(v, c.var_names, kv.line);
    } else if (k == "cover-relation-odd") {
      cover_ro = coeff(v, c.var_names, kv.line);
    } else if (k.rfind("witness-q", 0) == 0) {
      std::string rest = k.substr(9);
      size_t dash = rest.find('-');
      if (dash == std::string::npos)
        throw SyntaxError("malformed key '" + k + "'", kv.line, 1);
      int idx = std::stoi(rest.substr(0, dash));
      std::string part = rest.substr(dash + 1);
      DForm<RatFun> f = parse_form_expr(v, c.var_names, kv.line);
      int nb = (int)c.var_names.size();
      DForm<RatFun> zf(1, nb, RatFun(nb));
      auto it = qparts.find(idx);
      if (it == qparts.end())
        it = qparts.emplace(idx, std::make_pair(zf, zf)).first;
      if (part == "even") it->second.first = f;
      else if (part == "odd") it->second.second = f;
      else throw SyntaxError("malformed key '" + k + "'", kv.line, 1);
    } else if (k.rfind("witness-", 0) == 0) {
      int idx = std::stoi(k.substr(8));
      if ((int)c.w.size() <= idx) c.w.resize(idx + 1, DForm<RatFun>(1, (int)c.var_names.size(), RatFun((int)c.var_names.size())));
      c.w[idx] = parse_form_expr(v, c.var_names, kv.line);
    } else if (k == "alpha5-vars") {
      alpha_names = detail_parse::split_ws(v);
    } else if (k == "alpha5") {
      c.alpha5 = parse_form_expr(v, alpha_names, kv.line);
    } else if (k == "factor-f") {
      c.factor_f = coeff(v, tn, kv.line);
    } else if (k == "fun-g") {
      c.fun_g = coeff(v, tn, kv.line);
    } else if (k == "fun-h") {
      c.fun_h = coeff(v, tn, kv.line);
    } else if (k == "fun-u") {
      c.fun_u = coeff(v, tn, kv.line);
    } else if (k == "psi1") {
      c.psi1 = coeff(v, {"y"}, kv.line);
    } else if (k == "note") {
      c.note = v;
    } else if (k == "trail") {
      c.trail.push_back(v);
    } else if (k == "transcript") {
      if (transcript) transcript->push_back(v);
    } else {
      throw SyntaxError("unknown key '" + k + "'", kv.line, 1);
    }
  }
  if (c.on_cover) {
    if (!cover_re)
      throw SyntaxError("cover certificate without a relation", 1, 1);
    int nb = (int)c.var_names.size();
    c.cover_gen = cover_gen;
    c.cover_re = cover_re;
    c.cover_ro = cover_ro ? *cover_ro : RatFun(nb);
    ring = std::make_shared<QuadRing>(nb, cover_gen, *c.cover_re, *c.cover_ro);
    QuadElem zero = QuadElem::from_base(ring, RatFun(nb));
    QuadElem g = QuadElem::generator(ring);
    for (const auto& [idx, eo] : qparts) {
      DForm<QuadElem> w(1, nb, zero);
      for (const auto& [t, cf] : eo.first.coeffs())
        w.add_term(t, QuadElem::from_base(ring, cf));
      for (const auto& [t, cf] : eo.second.coeffs())
        w.add_term(t, g * QuadElem::from_base(ring, cf));
      if ((int)c.wq.size() <= idx) c.wq.resize(idx + 1, w);
      c.wq[idx] = w;
    }
  }
  if (!nested_kvs.empty())
    c.nested = std::make_shared<Certificate>(parse_kvs(nested_kvs, nullptr));
  return c;
}

}  // namespace detail_cert

inline std::string emit_certificate(const Certificate& c,
                                    const VerifyReport* rep = nullptr) {
  std::string out = "certificate: 1\n";
  detail_cert::emit_into(c, "", out);
  if (rep) {
    out += std::string("transcript: ") + (rep->ok ? "verified" : "NOT verified") + "\n";
    for (const auto& f : rep->failures) out += "transcript: failure: " + f + "\n";
  }
  return out;
}

inline Certificate parse_certificate(const std::string& text,
                                     std::vector<std::string>* transcript = nullptr) {
  using namespace detail_parse;
  std::vector<detail_cert::KV> kvs;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw SyntaxError("expected 'key: value'", lineno, 1);
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "certificate") {
      if (value != "1")
        throw SyntaxError("unsupported certificate version '" + value + "'",
                          lineno, (int)colon + 2);
      header = true;
      continue;
    }
    kvs.push_back({key, value, lineno});
  }
  if (!header) throw SyntaxError("missing 'certificate:' header", 1, 1);
  return detail_cert::parse_kvs(kvs, transcript);
}

}  // namespace fol

#endif
