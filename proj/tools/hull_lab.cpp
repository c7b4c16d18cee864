#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "hull_lab/cancellativity.hpp"
#include "hull_lab/regrep.hpp"
#include "hull_lab/regularity.hpp"

using namespace hull_lab;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string source;
  int radius = 5;
  std::string window = "-2..2";
  std::size_t bound = 64;
  std::size_t budget = 500;
  std::size_t max_word = 1;
  std::string format = "text";
};

struct Session {
  Options opt;
  std::string text;
  Presentation p;
  Window window;
  std::unique_ptr<Closure> closure;

  explicit Session(const Options& o) : opt(o) {
    if (o.source.rfind("builtin:", 0) == 0) {
      auto t = builtin::lookup(o.source.substr(8));
      if (!t) throw UsageError("unknown builtin presentation '" + o.source + "'");
      text = std::string(*t);
    } else {
      std::ifstream in(o.source, std::ios::binary);
      if (!in) throw UsageError("cannot read presentation file '" + o.source + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    p = parse_presentation(text);
    window = Window::parse(o.window);
    if (o.radius < 0) throw UsageError("--radius must be non-negative");
  }

  Ball ball() const { return Ball(p, opt.radius, window); }

  const Closure& tracked() {
    if (!closure) closure = std::make_unique<Closure>(semilattice_closure(p, ball(), {opt.budget, opt.max_word}));
    return *closure;
  }

  Word word(const std::string& s) const { return p.alphabet.parse_word(s); }
  std::string fmt(const Word& w) const { return p.alphabet.format(w); }

  json words(const std::vector<Word>& ws) const {
    json a = json::array();
    for (const auto& w : ws) a.push_back(fmt(w));
    return a;
  }

  json header(const std::string& command) const {
    json r;
    r["command"] = command;
    r["presentation"] = {{"source", opt.source}, {"hash", hex64(fnv1a(text))}};
    r["truncation"] = {{"radius", opt.radius}, {"window", window.str()}, {"bound", opt.bound},
                       {"budget", opt.budget}, {"max_word", opt.max_word}};
    return r;
  }
};

int exit_code(Status s) {
  switch (s) {
    case Status::holds: return 0;
    case Status::fails: return 1;
    case Status::unknown: return 2;
  }
  return 2;
}

void put_verdict(json& r, const Session& s, const Verdict& v) {
  r["status"] = to_string(v.status);
  r["words"] = s.words(v.words);
  if (!v.note.empty()) r["note"] = v.note;
  if (v.explored) r["explored"] = v.explored;
}

// Text output is rendered from the JSON report: the summary lines, then the
// status, then the truncation footer.
void emit(const json& r, const std::string& format) {
  if (format == "json") {
    std::cout << r.dump(2) << "\n";
    return;
  }
  if (r.contains("summary"))
    for (const auto& line : r["summary"]) std::cout << line.get<std::string>() << "\n";
  if (r.contains("status")) {
    std::cout << "status: " << r["status"].get<std::string>();
    if (r.contains("note")) std::cout << " (" << r["note"].get<std::string>() << ")";
    std::cout << "\n";
  }
  if (r.contains("truncation")) {
    const auto& t = r["truncation"];
    std::cout << "radius " << t["radius"] << ", window " << t["window"].get<std::string>() << ", presentation "
              << r["presentation"]["source"].get<std::string>() << " (" << r["presentation"]["hash"].get<std::string>()
              << ")\n";
  }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

json character(const Closure& c, const SemiCharacter& chi) {
  json a = json::array();
  for (int i : chi.support()) a.push_back(c.describe(i));
  return a;
}

std::vector<std::string> strings(const json& a) {
  std::vector<std::string> out;
  for (const auto& x : a) out.push_back(x.get<std::string>());
  return out;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_normalize(Session& s, const std::string& w) {
  json r = s.header("normalize");
  std::vector<Word> trace;
  Word n = normalize(s.p, s.word(w), &trace);
  r["input"] = s.fmt(s.word(w));
  r["normal_form"] = s.fmt(n);
  r["steps"] = trace.size();
  r["summary"] = {s.fmt(n)};
  emit(r, s.opt.format);
  return 0;
}

int cmd_equiv(Session& s, const std::string& a, const std::string& b) {
  json r = s.header("equiv");
  Verdict v = equivalent(s.p, s.word(a), s.word(b), s.opt.bound);
  put_verdict(r, s, v);
  emit(r, s.opt.format);
  return exit_code(v.status);
}

int cmd_cancel(Session& s) {
  json r = s.header("cancel-check");
  Verdict v = check_left_cancellative(s.p, s.opt.radius, s.window, s.opt.bound);
  put_verdict(r, s, v);
  if (v.fails() && v.words.size() == 3) {
    r["counterexample"] = {{"x", s.fmt(v.words[0])}, {"w", s.fmt(v.words[1])}, {"w_prime", s.fmt(v.words[2])}};
    r["summary"] = {"counterexample x = " + s.fmt(v.words[0]) + ", w = " + s.fmt(v.words[1]) +
                    ", w' = " + s.fmt(v.words[2])};
  }
  emit(r, s.opt.format);
  return exit_code(v.status);
}

int cmd_divides(Session& s, const std::string& a, const std::string& b) {
  json r = s.header("divides");
  Verdict v = left_divides(s.p, s.word(a), s.word(b), s.opt.bound);
  put_verdict(r, s, v);
  if (v.holds()) {
    r["cofactor"] = s.fmt(v.words[0]);
    r["summary"] = {"cofactor " + s.fmt(v.words[0])};
  }
  emit(r, s.opt.format);
  return exit_code(v.status);
}

int cmd_closure(Session& s) {
  json r = s.header("ideals closure");
  const Closure& c = s.tracked();
  json reps = json::array();
  std::map<std::string, int> shapes;
  for (std::size_t i = 0; i < c.reps.size(); ++i) {
    const auto& t = c.reps[i].trace;
    reps.push_back({{"description", c.describe(i)},
                    {"shape", to_string(shape_of(c.reps[i].ideal))},
                    {"generators", s.words(minimal_generators(*c.engine, t))},
                    {"fingerprint_hash", hex64(t.hash())}});
    ++shapes[to_string(shape_of(c.reps[i].ideal))];
  }
  r["representatives"] = reps;
  r["table"] = c.table;
  r["saturated"] = c.saturated;
  r["closure_hash"] = c.hash();
  std::vector<std::string> counts;
  for (const auto& [k, n] : shapes) counts.push_back(k + " " + std::to_string(n));
  json summary = json::array();
  for (std::size_t i = 0; i < c.reps.size(); ++i) summary.push_back(std::to_string(i) + ": " + c.describe(i));
  summary.push_back(std::to_string(c.reps.size()) + " representatives (" + join(counts, ", ") + "), " +
                    (c.saturated ? "saturated" : "budget exhausted"));
  r["summary"] = summary;
  r["status"] = c.saturated ? "holds" : "unknown";
  emit(r, s.opt.format);
  return c.saturated ? 0 : 2;
}

int cmd_intersect(Session& s, const std::string& a, const std::string& b) {
  json r = s.header("ideals intersect");
  IdealEngine eng(s.p, s.ball());
  Ideal I = eng.intersect(parse_ideal(s.p, a), parse_ideal(s.p, b));
  Ideal J = eng.classify(I);
  const Trace& t = eng.trace(J);
  r["description"] = eng.describe(J);
  r["shape"] = to_string(shape_of(J));
  r["generators"] = s.words(minimal_generators(eng, t));
  r["fingerprint_hash"] = hex64(t.hash());
  r["summary"] = {eng.describe(J) + " up to radius " + std::to_string(s.opt.radius) + ", window " + s.window.str()};
  emit(r, s.opt.format);
  return 0;
}

int cmd_containing(Session& s, const std::vector<std::string>& ws) {
  json r = s.header("ideals containing");
  const Closure& c = s.tracked();
  std::vector<Word> words;
  for (const auto& w : ws) words.push_back(normalize(s.p, s.word(w)));
  json out = json::array();
  for (int i : ideals_containing(c, words)) out.push_back(c.describe(i));
  r["words"] = s.words(words);
  r["ideals"] = out;
  r["saturated"] = c.saturated;
  r["closure_hash"] = c.hash();
  r["summary"] = out;
  emit(r, s.opt.format);
  return 0;
}

int cmd_align(Session& s, const std::string& a, const std::string& b) {
  json r = s.header("align-check");
  IdealEngine eng(s.p, s.ball());
  std::vector<AlignmentEntry> entries;
  if (!a.empty()) entries.push_back(alignment(eng, normalize(s.p, s.word(a)), normalize(s.p, s.word(b))));
  else entries = finite_alignment_report(eng);
  json arr = json::array();
  json summary = json::array();
  for (const auto& e : entries) {
    arr.push_back({{"s", s.fmt(e.s)}, {"t", s.fmt(e.t)}, {"count", e.generators.size()}, {"generators", s.words(e.generators)}});
    summary.push_back(s.fmt(e.s) + " ∩ " + s.fmt(e.t) + ": " + std::to_string(e.generators.size()) + " generators");
  }
  r["pairs"] = arr;
  r["summary"] = summary;
  emit(r, s.opt.format);
  return 0;
}

int cmd_chi(Session& s, const std::string& w) {
  json r = s.header("spectrum chi");
  const Closure& c = s.tracked();
  SemiCharacter chi = chi_of(c, s.word(w));
  r["word"] = s.fmt(normalize(s.p, s.word(w)));
  r["character"] = character(c, chi);
  r["closure_hash"] = c.hash();
  r["summary"] = {"chi = 1 on {" + join(strings(r["character"]), ", ") + "}"};
  emit(r, s.opt.format);
  return 0;
}

int cmd_limit(Session& s, const std::string& seq_text) {
  json r = s.header("spectrum limit");
  const Closure& c = s.tracked();
  Sequence seq = parse_sequence(s.p, seq_text);
  Window sw = sequence_window(s.window);
  LimitCharacter lim = limit_character(c, seq, sw);
  r["sequence"] = seq.text;
  r["sequence_window"] = sw.str();
  r["character"] = character(c, lim.chi);
  json div = json::array();
  for (int i : lim.divergent) div.push_back(c.describe(i));
  r["divergent"] = div;
  r["closure_hash"] = c.hash();
  r["status"] = lim.converged() ? "holds" : "unknown";
  if (!lim.converged()) r["note"] = "no stable value on " + std::to_string(lim.divergent.size()) + " tracked ideals";
  r["summary"] = {"limit = 1 on {" + join(strings(r["character"]), ", ") + "}"};
  emit(r, s.opt.format);
  return lim.converged() ? 0 : 2;
}

int cmd_omega(Session& s, const std::string& w, const std::string& seq_text) {
  json r = s.header("spectrum omega");
  const Closure& c = s.tracked();
  SemiCharacter chi;
  if (!seq_text.empty()) {
    LimitCharacter lim = limit_character(c, parse_sequence(s.p, seq_text), sequence_window(s.window));
    if (!lim.converged()) throw UsageError("the sequence does not converge on the tracked ideals");
    chi = lim.chi;
    r["sequence"] = seq_text;
  } else {
    chi = chi_of(c, s.word(w));
    r["word"] = s.fmt(normalize(s.p, s.word(w)));
  }
  auto covers = find_covers(c);
  Verdict v = is_in_omega(c, chi, covers);
  if (v.holds())
    if (auto bad = filter_violation(c, chi)) v = Verdict::make(Status::fails, {}, *bad);
  r["character"] = character(c, chi);
  json cj = json::array();
  for (const auto& cv : covers) {
    json parts = json::array();
    for (int i : cv.parts) parts.push_back(c.describe(i));
    cj.push_back({{"X", c.describe(cv.whole)}, {"parts", parts}});
  }
  r["covers"] = cj;
  r["closure_hash"] = c.hash();
  put_verdict(r, s, v);
  emit(r, s.opt.format);
  return exit_code(v.status);
}

GeneralizedIdeal generalized(const Session& s, const std::string& x, const std::vector<std::string>& removed) {
  GeneralizedIdeal g{parse_ideal(s.p, x), {}};
  for (const auto& d : removed) g.removed.push_back(parse_ideal(s.p, d));
  return g;
}

int cmd_regularity(Session& s, const std::string& kind, const std::string& x, const std::vector<std::string>& removed,
                   const std::vector<std::string>& hs_text) {
  json r = s.header("regularity check");
  const Closure& c = s.tracked();
  HullCalculus hc(*c.engine);
  GeneralizedIdeal X = generalized(s, x, removed);
  std::vector<HullElement> hs;
  for (const auto& h : hs_text) hs.push_back(hc.parse(h));
  if (hs.empty()) throw UsageError("at least one --h is required");
  r["kind"] = kind;
  r["X"] = c.engine->describe(X);
  r["h"] = json::array();
  for (const auto& h : hs) r["h"].push_back(hc.format(h));
  WitnessResult res;
  try {
    if (kind == "gp-eq-g") {
      if (hs.size() != 1) throw UsageError("gp-eq-g takes exactly one --h");
      res = gp_eq_g_check(c, hs[0], X, s.opt.budget);
    } else {
      Verdict c1 = condition1_check(hc, X, hs);
      r["condition1"] = to_string(c1.status);
      if (!c1.holds()) {
        put_verdict(r, s, c1);
        std::string why = c1.words.empty() ? c1.note : s.fmt(c1.words[0]) + " is fixed by no h_k";
        r["summary"] = {"condition 1 does not hold for X: " + why};
        emit(r, s.opt.format);
        return exit_code(c1.status);
      }
      res = regularity_witness(c, X, hs, kind == "cstar" ? WitnessKind::cstar : WitnessKind::strong, s.opt.budget);
    }
  } catch (const PreconditionError& e) {
    throw UsageError(std::string("not a valid instance: ") + e.what());
  }
  json Y = json::array(), k = json::array();
  for (const auto& part : res.parts) {
    Y.push_back(c.engine->describe(part.Y));
    k.push_back(part.k + 1);
  }
  r["witness"] = {{"Y", Y}, {"k", k}, {"radius", s.opt.radius}, {"window", s.window.str()}, {"budget", s.opt.budget}};
  r["examined"] = res.examined;
  r["closure_hash"] = c.hash();
  put_verdict(r, s, res.verdict);
  json summary = json::array();
  for (std::size_t i = 0; i < res.parts.size(); ++i)
    summary.push_back("Y" + std::to_string(i + 1) + " = " + Y[i].get<std::string>() + ", k = " + std::to_string(res.parts[i].k + 1));
  r["summary"] = summary;
  emit(r, s.opt.format);
  return exit_code(res.verdict.status);
}

int cmd_hausdorff(Session& s) {
  json r = s.header("hausdorff scan");
  const Closure& c = s.tracked();
  HullCalculus hc(*c.engine);
  auto ws = hausdorff_witness_search(c, sequence_window(s.window), s.opt.budget * 100);
  json arr = json::array(), summary = json::array();
  for (const auto& w : ws) {
    arr.push_back({{"g", hc.format(w.g)}, {"sequence", w.seq.text}, {"limit", character(c, w.limit.chi)}});
    summary.push_back("(" + hc.format(w.g) + ", " + w.seq.text + ")");
  }
  r["witnesses"] = arr;
  r["closure_hash"] = c.hash();
  r["summary"] = summary;
  emit(r, s.opt.format);
  return 0;
}

int cmd_eval(Session& s, const std::string& expr) {
  json r = s.header("regrep eval");
  IdealEngine eng(s.p, s.ball());
  RegularRep rep(eng);
  Op e = parse_op(rep.hull(), expr);
  Word worst;
  double res = rep.residual(e, &worst);
  r["expr"] = expr;
  r["depth"] = depth(e);
  r["interior_vectors"] = rep.interior_size(e);
  r["residual"] = res;
  if (res > 0) r["worst"] = s.fmt(worst);
  r["status"] = res <= 1e-12 ? "holds" : "fails";
  std::ostringstream os;
  os << "residual " << res;
  r["summary"] = {os.str()};
  emit(r, s.opt.format);
  return res <= 1e-12 ? 0 : 1;
}

int cmd_r4(Session& s, const std::string& x, const std::vector<std::string>& covers_text) {
  json r = s.header("regrep r4");
  IdealEngine eng(s.p, s.ball());
  RegularRep rep(eng);
  Ideal X = parse_ideal(s.p, x);
  std::vector<Ideal> covers;
  for (const auto& d : covers_text) covers.push_back(parse_ideal(s.p, d));
  R4Result res = r4_check(rep, eng, X, covers);
  r["X"] = eng.describe(X);
  r["cover_holds"] = res.cover_holds;
  r["residual"] = res.residual;
  r["note"] = res.note;
  Status st = !res.cover_holds ? Status::unknown : res.residual <= 1e-12 ? Status::holds : Status::fails;
  r["status"] = to_string(st);
  std::ostringstream os;
  os << "residual " << res.residual;
  r["summary"] = {os.str()};
  emit(r, s.opt.format);
  return exit_code(st);
}

int cmd_lemma16(const std::string& m_text, double alpha, int trace_m, const std::string& format) {
  json r;
  r["command"] = "regrep lemma16";
  json summary = json::array();
  if (trace_m > 0) {
    double t = lemma16_b_trace(trace_m);
    r["m"] = trace_m;
    r["b_trace"] = t;
    std::ostringstream os;
    os.precision(17);
    os << "normalized trace of b for m = " << trace_m << ": " << t;
    summary.push_back(os.str());
  } else {
    std::optional<int> m;
    if (m_text != "inf") {
      try {
        m = std::stoi(m_text);
      } catch (const std::exception&) {
        throw UsageError("--m takes an integer or 'inf'");
      }
    }
    EpsResult e;
    try {
      e = lemma16_eps(m, alpha);
    } catch (const PreconditionError& err) {
      throw UsageError(err.what());
    }
    double lhs = alpha * (1 - e.m * e.eps) * (1 - e.m * e.eps);
    r["m"] = m_text;
    r["m_used"] = e.m;
    r["alpha"] = alpha;
    r["eps"] = e.eps;
    r["sup"] = e.sup;
    r["check"] = {{"lhs", lhs}, {"rhs", 1.0 / e.m}, {"holds", lhs > 1.0 / e.m}};
    std::ostringstream os;
    os.precision(10);
    os << "eps = " << e.eps << " (supremum " << e.sup << ", m' = " << e.m << ")";
    summary.push_back(os.str());
  }
  r["summary"] = summary;
  r["status"] = "holds";
  emit(r, format);
  return 0;
}

void common(CLI::App* c, Options& o, bool ball = true) {
  c->add_option("presentation", o.source, "presentation file or builtin:S|T|free2|abac")->required();
  if (ball) {
    c->add_option("--radius", o.radius, "ball radius")->capture_default_str();
    c->add_option("--window", o.window, "index window a..b")->capture_default_str();
    c->add_option("--max-word", o.max_word, "longest word produced by translation in the closure")->capture_default_str();
  }
  c->add_option("--bound", o.bound, "search bound")->capture_default_str();
  c->add_option("--budget", o.budget, "closure and witness budget")->capture_default_str();
  c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hull-lab: left inverse hulls of indexed monoid presentations"};
  app.require_subcommand(1);
  Options o;
  std::string w1, w2, expr, seq, kind = "strong", x, m_text = "2";
  std::vector<std::string> list, removed, hs;
  double alpha = 0.6;
  int trace_m = 0;
  std::function<int(Session&)> run;

  auto* normalize_cmd = app.add_subcommand("normalize", "normal form of a word");
  common(normalize_cmd, o, false);
  normalize_cmd->add_option("word", w1)->required();
  normalize_cmd->callback([&] { run = [&](Session& s) { return cmd_normalize(s, w1); }; });

  auto* equiv_cmd = app.add_subcommand("equiv", "word equivalence");
  common(equiv_cmd, o, false);
  equiv_cmd->add_option("w1", w1)->required();
  equiv_cmd->add_option("w2", w2)->required();
  equiv_cmd->callback([&] { run = [&](Session& s) { return cmd_equiv(s, w1, w2); }; });

  auto* cancel_cmd = app.add_subcommand("cancel-check", "bounded left cancellativity");
  common(cancel_cmd, o);
  cancel_cmd->callback([&] { run = [&](Session& s) { return cmd_cancel(s); }; });

  auto* divides_cmd = app.add_subcommand("divides", "left divisibility s | w");
  common(divides_cmd, o, false);
  divides_cmd->add_option("s", w1)->required();
  divides_cmd->add_option("w", w2)->required();
  divides_cmd->callback([&] { run = [&](Session& s) { return cmd_divides(s, w1, w2); }; });

  auto* ideals_cmd = app.add_subcommand("ideals", "constructible right ideals");
  ideals_cmd->require_subcommand(1);
  auto* closure_cmd = ideals_cmd->add_subcommand("closure", "semilattice closure");
  common(closure_cmd, o);
  closure_cmd->callback([&] { run = [&](Session& s) { return cmd_closure(s); }; });
  auto* intersect_cmd = ideals_cmd->add_subcommand("intersect", "intersection of two ideals");
  common(intersect_cmd, o);
  intersect_cmd->add_option("I1", w1)->required();
  intersect_cmd->add_option("I2", w2)->required();
  intersect_cmd->callback([&] { run = [&](Session& s) { return cmd_intersect(s, w1, w2); }; });
  auto* containing_cmd = ideals_cmd->add_subcommand("containing", "tracked ideals containing the words");
  common(containing_cmd, o);
  containing_cmd->add_option("words", list)->required();
  containing_cmd->callback([&] { run = [&](Session& s) { return cmd_containing(s, list); }; });

  auto* align_cmd = app.add_subcommand("align-check", "generator counts of sS ∩ tS");
  common(align_cmd, o);
  align_cmd->add_option("s", w1);
  align_cmd->add_option("t", w2);
  align_cmd->callback([&] {
    if (w1.empty() != w2.empty()) throw CLI::ValidationError("align-check takes both s and t, or neither");
    run = [&](Session& s) { return cmd_align(s, w1, w2); };
  });

  auto* spectrum_cmd = app.add_subcommand("spectrum", "semi-characters");
  spectrum_cmd->require_subcommand(1);
  auto* chi_cmd = spectrum_cmd->add_subcommand("chi", "point character of a word");
  common(chi_cmd, o);
  chi_cmd->add_option("word", w1)->required();
  chi_cmd->callback([&] { run = [&](Session& s) { return cmd_chi(s, w1); }; });
  auto* limit_cmd = spectrum_cmd->add_subcommand("limit", "limit character of a sequence");
  common(limit_cmd, o);
  limit_cmd->add_option("--seq", seq, "sequence such as \"b x[n]\"")->required();
  limit_cmd->callback([&] { run = [&](Session& s) { return cmd_limit(s, seq); }; });
  auto* omega_cmd = spectrum_cmd->add_subcommand("omega", "conditions (i) and (ii)");
  common(omega_cmd, o);
  auto* ow = omega_cmd->add_option("--word", w1, "point character of this word");
  auto* os = omega_cmd->add_option("--seq", seq, "limit character of this sequence");
  ow->excludes(os);
  omega_cmd->callback([&] {
    if (w1.empty() && seq.empty()) throw CLI::ValidationError("spectrum omega needs --word or --seq");
    run = [&](Session& s) { return cmd_omega(s, w1, seq); };
  });

  auto* regularity_cmd = app.add_subcommand("regularity", "regularity witnesses");
  regularity_cmd->require_subcommand(1);
  auto* check_cmd = regularity_cmd->add_subcommand("check", "witness search");
  common(check_cmd, o);
  check_cmd->add_option("--kind", kind)->check(CLI::IsMember({"strong", "cstar", "gp-eq-g"}))->capture_default_str();
  check_cmd->add_option("--X", x, "ideal description")->required();
  check_cmd->add_option("--remove", removed, "removed ideal (repeatable)");
  check_cmd->set_help_flag("--help", "print this help message and exit");
  check_cmd->add_option("--h,--g", hs, "hull element (repeatable)");
  check_cmd->callback([&] { run = [&](Session& s) { return cmd_regularity(s, kind, x, removed, hs); }; });

  auto* hausdorff_cmd = app.add_subcommand("hausdorff", "Hausdorffness witnesses");
  hausdorff_cmd->require_subcommand(1);
  auto* scan_cmd = hausdorff_cmd->add_subcommand("scan", "search (g, seq) pairs");
  common(scan_cmd, o);
  scan_cmd->callback([&] { run = [&](Session& s) { return cmd_hausdorff(s); }; });

  auto* regrep_cmd = app.add_subcommand("regrep", "regular representation on a ball");
  regrep_cmd->require_subcommand(1);
  auto* eval_cmd = regrep_cmd->add_subcommand("eval", "interior residual of an operator polynomial");
  common(eval_cmd, o);
  eval_cmd->add_option("--expr", expr)->required();
  eval_cmd->callback([&] { run = [&](Session& s) { return cmd_eval(s, expr); }; });
  auto* r4_cmd = regrep_cmd->add_subcommand("r4", "product of indicator differences over a cover");
  common(r4_cmd, o);
  r4_cmd->add_option("--X", x)->required();
  r4_cmd->add_option("--cover", list, "cover ideal (repeatable)")->required();
  r4_cmd->callback([&] { run = [&](Session& s) { return cmd_r4(s, x, list); }; });
  auto* lemma_cmd = regrep_cmd->add_subcommand("lemma16", "eps bound or normalized trace of b");
  lemma_cmd->add_option("--m", m_text, "integer or inf")->capture_default_str();
  lemma_cmd->add_option("--alpha", alpha)->capture_default_str();
  lemma_cmd->add_option("--trace", trace_m, "compute the normalized trace of b for this m");
  lemma_cmd->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  bool lemma = false;
  lemma_cmd->callback([&] { lemma = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  try {
    if (lemma) return cmd_lemma16(m_text, alpha, trace_m, o.format);
    Session s(o);
    return run(s);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const BudgetExceeded& e) {
    std::cerr << "unknown: " << e.what() << "\n";
    return 2;
  }
}
