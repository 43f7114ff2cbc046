// Command-line driver: parse 1-form documents, run the degree-4 analysis
// pipeline, and read/write classification certificates.
//
// Exit codes: 0 success, 1 mathematical failure (non-integrable input,
// failed verification, ...), 2 usage or parse error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fol/certdoc.hpp"
#include "fol/classifier.hpp"
#include "fol/foliation.hpp"
#include "fol/parse.hpp"

using namespace fol;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string yn(bool b) { return b ? "yes" : "no"; }

std::vector<Rat> parse_point_arg(const std::string& csv) {
  try {
    return detail_parse::parse_point(csv, 1);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad --point value: ") + e.what());
  }
}

std::vector<std::string> chart_names(const std::vector<std::string>& vars,
                                     int chart) {
  std::vector<std::string> out;
  for (int i = 0; i < (int)vars.size(); ++i)
    if (i != chart) out.push_back(vars[i]);
  return out;
}

int cmd_check(const FormDocument& doc) {
  ValidationReport rep = validate(doc.form);
  std::cout << "polynomial: " << yn(rep.polynomial) << "\n";
  std::cout << "homogeneous: " << yn(rep.homogeneous);
  if (rep.homogeneous)
    std::cout << " (coefficient degree " << rep.coeff_degree << ")";
  std::cout << "\n";
  if (rep.polynomial && rep.homogeneous) {
    std::cout << "radial: " << yn(rep.radial) << "\n";
    std::cout << "integrable: " << yn(rep.integrable) << "\n";
    if (!rep.integrable)
      std::cout << "witness: "
                << wedge(doc.form, exterior_d(doc.form)).str(doc.vars) << "\n";
    std::cout << "saturated: " << yn(rep.saturated) << "\n";
  }
  return rep.ok() ? 0 : 1;
}

int cmd_degree(const FormDocument& doc) {
  ValidationReport rep = validate(doc.form);
  if (!rep.polynomial || !rep.homogeneous || !rep.radial || !rep.integrable) {
    std::cout << "not a foliation form (run 'check' for details)\n";
    return 1;
  }
  DForm<RatFun> sat = saturate(doc.form);
  std::cout << *homogeneous_coeff_degree(sat) - 1 << "\n";
  return 0;
}

int cmd_jet(const FormDocument& doc, int chart, const std::string& point_csv) {
  Foliation F = make_foliation(doc.form);
  std::vector<Rat> pt = parse_point_arg(point_csv);
  std::cout << "jet: " << jet_order(F, chart, pt) << "\n";
  return 0;
}

int cmd_blowup(const FormDocument& doc, int chart,
               const std::string& point_csv, int dir) {
  Foliation F = make_foliation(doc.form);
  std::vector<Rat> pt = parse_point_arg(point_csv);
  if (dir < 0) dir = F.n - 1;
  AffineExpansion ex = expand_degree4(F, chart, pt);
  BlowupChartData b = blowup_chart(ex, dir);
  std::vector<std::string> cn = chart_names(doc.vars, chart);
  std::vector<std::string> tn = chart_names(cn, dir);
  std::cout << "chart: " << chart << "\n";
  std::cout << "point: " << detail_cert::point_csv(pt) << "\n";
  std::cout << "dir: " << dir << " (" << cn[dir] << ")\n";
  for (int j = 2; j <= 5; ++j)
    std::cout << "theta-" << j << ": " << b.th(j).str(tn) << "\n";
  for (int j = 3; j <= 5; ++j)
    std::cout << "F-" << j << ": " << b.f(j).str(tn) << "\n";
  std::cout << "case: " << case_tag(b) << "\n";
  return 0;
}

int cmd_gvs(const FormDocument& doc, const std::string& field, int cap) {
  int xvar = -1;
  for (int i = 0; i < (int)doc.vars.size(); ++i)
    if (doc.vars[i] == field) xvar = i;
  if (xvar < 0) throw UsageError("--field '" + field + "' is not a declared variable");
  auto seq = gvs_compute(doc.form, xvar, cap);
  if (!seq) {
    std::cout << "no transverse field: the d" << field << " coefficient vanishes\n";
    return 1;
  }
  std::cout << "length: " << seq->length() << "\n";
  std::cout << "terminated: " << yn(seq->terminated) << "\n";
  for (size_t k = 0; k < seq->omega.size(); ++k)
    std::cout << "omega-" << k << ": " << seq->omega[k].str(doc.vars) << "\n";
  return seq->terminated ? 0 : 1;
}

int cmd_classify(const FormDocument& doc, const CLI::App& sub,
                 int chart, const std::string& point_csv,
                 const std::string& hint, const std::string& emit_path) {
  Foliation F = make_foliation(doc.form);
  ClassifyOptions opt;
  if (sub.count("--chart")) opt.chart = chart;
  if (!point_csv.empty()) opt.point = parse_point_arg(point_csv);
  if (!hint.empty()) {
    int m = F.n - 1;
    RatFun h;
    try {
      h = parse_coeff(hint, detail_cls::tau_names(m));
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad --hint-factor value: ") + e.what());
    }
    if (!h.is_polynomial())
      throw UsageError("--hint-factor must be a polynomial");
    opt.hint_factor = (Rat(1) / h.den().constant_value()) * h.num();
  }
  Certificate c = classify(F, opt);
  VerifyReport rep = verify_certificate(c, F);
  std::cout << "kind: " << cert_kind_name(c.kind) << "\n";
  if (c.tag > 0) std::cout << "case: " << c.tag << "\n";
  if (c.chart >= 0) std::cout << "chart: " << c.chart << "\n";
  if (!c.point.empty())
    std::cout << "point: " << detail_cert::point_csv(c.point) << "\n";
  for (const auto& t : c.trail) std::cout << "trail: " << t << "\n";
  if (!c.note.empty()) std::cout << "note: " << c.note << "\n";
  std::cout << "verified: " << yn(rep.ok) << "\n";
  for (const auto& f : rep.failures) std::cout << "failure: " << f << "\n";
  if (!emit_path.empty()) {
    std::ofstream out(emit_path);
    if (!out) throw UsageError("cannot write '" + emit_path + "'");
    out << emit_certificate(c, &rep);
  }
  return rep.ok ? 0 : 1;
}

int cmd_verify(const std::string& cert_path, const std::string& fol_path) {
  Certificate c = parse_certificate(slurp(cert_path));
  FormDocument doc = parse_form_document(slurp(fol_path));
  Foliation F = make_foliation(doc.form);
  VerifyReport rep = verify_certificate(c, F);
  std::cout << "verified: " << yn(rep.ok) << "\n";
  for (const auto& f : rep.failures) std::cout << "failure: " << f << "\n";
  return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact analysis of degree-4 codimension-one foliations"};
  app.require_subcommand(1);

  std::string file, point_csv, field, hint, emit_path, cert_path, fol_path;
  int chart = 0, dir = -1, cap = 8;

  CLI::App* check = app.add_subcommand("check", "validate a 1-form document");
  check->add_option("file", file)->required();

  CLI::App* degree = app.add_subcommand("degree", "degree of the saturated foliation");
  degree->add_option("file", file)->required();

  CLI::App* jet = app.add_subcommand("jet", "jet order at a chart point");
  jet->add_option("file", file)->required();
  jet->add_option("--point", point_csv)->required();
  jet->add_option("--chart", chart);

  CLI::App* blowup = app.add_subcommand("blowup", "blow-up chart data and case tag");
  blowup->add_option("file", file)->required();
  blowup->add_option("--point", point_csv)->required();
  blowup->add_option("--chart", chart);
  blowup->add_option("--dir", dir);

  CLI::App* gvs = app.add_subcommand("gvs", "transverse descending sequence");
  gvs->add_option("file", file)->required();
  gvs->add_option("--field", field)->required();
  gvs->add_option("--cap", cap);

  CLI::App* classify_cmd = app.add_subcommand("classify", "run the structure analysis");
  classify_cmd->add_option("file", file)->required();
  classify_cmd->add_option("--point", point_csv);
  classify_cmd->add_option("--chart", chart);
  classify_cmd->add_option("--hint-factor", hint);
  classify_cmd->add_option("--emit", emit_path);

  CLI::App* verify = app.add_subcommand("verify", "check a certificate against a foliation");
  verify->add_option("certificate", cert_path)->required();
  verify->add_option("foliation", fol_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(cert_path, fol_path);
    FormDocument doc = parse_form_document(slurp(file));
    if (*check) return cmd_check(doc);
    if (*degree) return cmd_degree(doc);
    if (*jet) return cmd_jet(doc, chart, point_csv);
    if (*blowup) return cmd_blowup(doc, chart, point_csv, dir);
    if (*gvs) return cmd_gvs(doc, field, cap);
    if (*classify_cmd)
      return cmd_classify(doc, *classify_cmd, chart, point_csv, hint, emit_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownVariable& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
