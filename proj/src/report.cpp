#include "kr/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "kr/eval.hpp"
#include "kr/flows.hpp"
#include "kr/structure.hpp"

namespace kr {

using ojson = nlohmann::ordered_json;

namespace {

ojson header(const std::string& command) {
  ojson h;
  h["schema"] = kSchema;
  h["version"] = kVersion;
  h["command"] = command;
  return h;
}

ojson input_json(const InputDocument& d, const FiniteSemigroup& s) {
  ojson j;
  j["name"] = d.name;
  j["format"] = d.format == InputDocument::Format::Generators ? "generators" : "cayley";
  j["digest"] = digest(d);
  j["order"] = s.size();
  return j;
}

ojson config_json(const RunConfig& c) {
  ojson j;
  j["k"] = c.k;
  j["budget_states"] = c.budget_states;
  j["budget_nodes"] = c.budget_nodes;
  j["seed"] = c.seed;
  return j;
}

std::string element_label(const FiniteSemigroup& s, u32 x) {
  if (s.has_action()) return "[" + s.action().act[x].str() + "]";
  return std::to_string(x);
}

// J-classes from the top down: more classes below first, then by id.
std::vector<u32> j_order(const GreenStructure& g) {
  std::vector<u32> order(g.nj);
  for (u32 i = 0; i < g.nj; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](u32 a, u32 b) { return g.j_below[a].count() > g.j_below[b].count(); });
  return order;
}

ojson green_json(const FiniteSemigroup& s) {
  GreenStructure g = green_structure(s);
  ojson res;
  res["order"] = s.size();
  res["idempotents"] = g.idempotents.size();
  res["j_classes"] = g.nj;
  res["r_classes"] = g.nr;
  res["l_classes"] = g.nl;
  res["h_classes"] = g.nh;
  res["aperiodic"] = is_aperiodic(s, g);
  ojson classes = ojson::array();
  for (u32 j : j_order(g)) {
    std::vector<u32> rs, ls;
    for (u32 x : g.j_members[j]) {
      if (std::find(rs.begin(), rs.end(), g.r[x]) == rs.end()) rs.push_back(g.r[x]);
      if (std::find(ls.begin(), ls.end(), g.l[x]) == ls.end()) ls.push_back(g.l[x]);
    }
    ojson cls;
    cls["id"] = j;
    cls["size"] = g.j_members[j].size();
    cls["regular"] = static_cast<bool>(g.j_regular[j]);
    cls["group_order"] = g.j_regular[j] ? g.h_members[g.h[g.j_members[j][0]]].size() : 0;
    ojson rows = ojson::array();
    for (u32 r : rs) {
      ojson row = ojson::array();
      for (u32 l : ls) {
        ojson cell = ojson::array();
        for (u32 x : g.j_members[j])
          if (g.r[x] == r && g.l[x] == l) cell.push_back(element_label(s, x) + (g.idem[x] ? "*" : ""));
        row.push_back(cell);
      }
      rows.push_back(row);
    }
    cls["eggbox"] = rows;
    classes.push_back(cls);
  }
  res["classes"] = classes;
  return res;
}

ojson bound_json(u32 value, bool exact, const char* source) {
  ojson j;
  j["value"] = value;
  j["exact"] = exact;
  j["source"] = source;
  return j;
}

ojson bounds_json(const FiniteSemigroup& s) {
  Bounds b = complexity_bounds(s);
  ojson res;
  res["sl"] = bound_json(b.sl.value, b.sl.exact, "sl_bound");
  res["depth"] = bound_json(b.depth, true, "depth");
  res["theta"] = bound_json(b.theta.value, b.theta.exact, "theta");
  res["lower"] = b.lower;
  res["upper"] = b.upper;
  res["lower_source"] = "Sl";
  res["upper_source"] = b.theta.exact && b.theta.value < b.depth ? "theta" : "depth";
  return res;
}

EvalConfig eval_config(const RunConfig& c) {
  EvalConfig e;
  e.max_states = c.budget_states;
  e.max_nodes = c.budget_nodes;
  return e;
}

ojson gm_json(const GMSemigroup& gm) {
  ojson j;
  j["source_j"] = gm.source_j;
  j["order"] = gm.s.size();
  j["group_order"] = gm.ng();
  j["columns"] = gm.nb;
  j["points"] = gm.npts();
  return j;
}

std::vector<GMSemigroup> images_of(const FiniteSemigroup& s, GreenStructure& g) {
  g = green_structure(s);
  return gm_images(s, g);
}

}  // namespace

Report error_report(const std::string& command, const std::string& message) {
  Report r;
  r.body = header(command);
  r.body["status"] = "error";
  r.body["error"] = message;
  r.code = ExitCode::HardError;
  return r;
}

Report run(const std::string& command, const InputDocument& doc, const RunConfig& cfg,
           const std::optional<InputDocument>& other, const std::string& flow_text) {
  Report r;
  r.body = header(command);
  Limits lim;
  lim.max_nodes = cfg.budget_nodes;
  FiniteSemigroup s = to_semigroup(doc, lim);
  r.body["input"] = input_json(doc, s);
  r.body["config"] = config_json(cfg);
  ojson res;
  std::string status = "ok";

  if (command == "green") {
    res = green_json(s);
  } else if (command == "bounds") {
    res = bounds_json(s);
  } else if (command == "complexity") {
    Evaluator ev(eval_config(cfg));
    Verdict v = ev.decide(s);
    res["lower"] = v.lower;
    res["upper"] = v.upper;
    res["lower_source"] = v.lower_source;
    res["upper_source"] = v.upper_source;
    if (v.value) res["value"] = *v.value;
    else res["value"] = nullptr;
    res["budget_exceeded"] = v.budget_exceeded;
    res["notes"] = v.notes;
    if (!v.value) status = "bounds-only";
  } else if (command == "eval") {
    EvalConfig ec = eval_config(cfg);
    if (cfg.k > ec.max_k) throw Error("eval: k = " + std::to_string(cfg.k) + " exceeds the depth cap " + std::to_string(ec.max_k));
    Evaluator ev(ec);
    GreenStructure g;
    ojson list = ojson::array();
    for (auto& gm : images_of(s, g)) {
      ojson item;
      item["gm"] = gm_json(gm);
      try {
        EvalTS e;
        bool c = ev.has_contradiction(gm, cfg.k, &e);
        item["monoid"] = e.monoid.size();
        item["omega_star_added"] = e.omega_star_count;
        item["states"] = e.states.size();
        item["contradiction"] = c;
        if (c) item["witness"] = e.witness(*e.contradiction);
        else item["witness"] = nullptr;
        ojson names = ojson::array();
        for (u32 st : e.states) names.push_back(e.lattice->name(st));
        item["state_list"] = names;
      } catch (const BudgetExceeded& ex) {
        item["contradiction"] = nullptr;
        item["budget_exceeded"] = ex.what();
        status = "bounds-only";
      }
      list.push_back(item);
    }
    res["k"] = cfg.k;
    res["images"] = list;
    res["sp_checks"] = ev.stats().sp_checks;
    res["sp_skipped"] = ev.stats().sp_skipped;
  } else if (command == "flow-verify") {
    GreenStructure g;
    auto images = images_of(s, g);
    if (cfg.gm >= images.size())
      throw Error("flow-verify: GM image " + std::to_string(cfg.gm) + " does not exist (" +
                  std::to_string(images.size()) + " available)");
    const GMSemigroup& gm = images[cfg.gm];
    FlowFile ff = parse_flow(flow_text, gm);
    FlowReport fr = verify_complete_flow(ff.automaton, ff.assignment, gm);
    res["gm"] = gm_json(gm);
    res["states"] = ff.automaton.nstates;
    res["flow"] = fr.ok;
    if (fr.ok) {
      res["condition"] = nullptr;
    } else {
      res["condition"] = fr.condition;
      res["state"] = fr.state == UNDEF ? ojson(nullptr) : ojson(fr.state);
      res["letter"] = fr.letter == UNDEF ? ojson(nullptr) : ojson(fr.letter);
      res["message"] = fr.message;
    }
  } else if (command == "divides") {
    if (!other) throw Error("divides: a second semigroup is required");
    FiniteSemigroup t = to_semigroup(*other, lim);
    r.body["target"] = input_json(*other, t);
    DivisionResult d = divides(s, t, cfg.budget_nodes);
    res["nodes"] = d.nodes;
    if (d.outcome == Outcome::Unknown) {
      res["divides"] = nullptr;
      status = "bounds-only";
    } else {
      res["divides"] = d.outcome == Outcome::Yes;
      if (d.outcome == Outcome::Yes) res["generator_images"] = d.witness;
    }
  } else {
    throw Error("unknown command '" + command + "'");
  }
  r.body["status"] = status;
  r.body["results"] = res;
  if (status == "bounds-only") r.code = ExitCode::BoundsOnly;
  return r;
}

std::string emit_json(const Report& r) { return r.body.dump(2) + "\n"; }

namespace {

std::string str(const ojson& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void text_eggbox(std::ostringstream& os, const ojson& cls) {
  os << "J" << cls["id"].get<u32>() << "  size " << cls["size"].get<std::size_t>()
     << (cls["regular"].get<bool>() ? "  regular" : "  null");
  if (cls["regular"].get<bool>()) os << "  H " << cls["group_order"].get<std::size_t>();
  os << '\n';
  const ojson& rows = cls["eggbox"];
  std::size_t ncol = rows[0].size();
  std::vector<std::size_t> width(ncol, 1);
  std::vector<std::vector<std::string>> cells;
  for (auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < ncol; ++c) {
      std::string t;
      for (auto& e : row[c]) t += (t.empty() ? "" : " ") + e.get<std::string>();
      width[c] = std::max(width[c], t.size());
      line.push_back(t);
    }
    cells.push_back(line);
  }
  auto rule = [&] {
    os << '+';
    for (auto w : width) os << std::string(w + 2, '-') << '+';
    os << '\n';
  };
  rule();
  for (auto& line : cells) {
    os << '|';
    for (std::size_t c = 0; c < ncol; ++c) os << ' ' << line[c] << std::string(width[c] - line[c].size(), ' ') << " |";
    os << '\n';
    rule();
  }
}

}  // namespace

std::string emit_text(const Report& r) {
  std::ostringstream os;
  const ojson& b = r.body;
  std::string cmd = b["command"];
  if (b["status"] == "error") {
    os << "error: " << b["error"].get<std::string>() << '\n';
    return os.str();
  }
  const ojson& in = b["input"];
  os << cmd << ": " << (in["name"].get<std::string>().empty() ? "<unnamed>" : in["name"].get<std::string>())
     << "  order " << in["order"].get<std::size_t>() << "  digest " << in["digest"].get<std::string>() << '\n';
  const ojson& res = b["results"];
  if (cmd == "green") {
    os << "idempotents " << res["idempotents"] << "  J " << res["j_classes"] << "  R " << res["r_classes"] << "  L "
       << res["l_classes"] << "  H " << res["h_classes"] << (res["aperiodic"].get<bool>() ? "  aperiodic" : "") << '\n';
    for (auto& cls : res["classes"]) text_eggbox(os, cls);
  } else if (cmd == "bounds") {
    for (const char* k : {"sl", "depth", "theta"})
      os << k << " = " << res[k]["value"] << (res[k]["exact"].get<bool>() ? "" : " (estimate)") << '\n';
    os << "lower " << res["lower"] << " (" << str(res["lower_source"]) << ")  upper " << res["upper"] << " ("
       << str(res["upper_source"]) << ")\n";
  } else if (cmd == "complexity") {
    if (res["value"].is_null()) os << "complexity unknown within budget\n";
    else os << "complexity " << res["value"] << '\n';
    os << "lower " << res["lower"] << " (" << str(res["lower_source"]) << ")  upper " << res["upper"] << " ("
       << str(res["upper_source"]) << ")\n";
    for (auto& n : res["notes"]) os << "note: " << n.get<std::string>() << '\n';
  } else if (cmd == "eval") {
    for (auto& it : res["images"]) {
      const ojson& gm = it["gm"];
      os << "GM at J" << gm["source_j"] << "  |G| " << gm["group_order"] << "  |B| " << gm["columns"] << "  Eval_"
         << res["k"] << ": ";
      if (it["contradiction"].is_null()) {
        os << "budget exceeded (" << str(it["budget_exceeded"]) << ")\n";
        continue;
      }
      os << "monoid " << it["monoid"] << "  states " << it["states"] << "  "
         << (it["contradiction"].get<bool>() ? "contradiction" : "no contradiction") << '\n';
      if (!it["witness"].is_null()) os << "  witness " << str(it["witness"]) << '\n';
    }
    if (res["images"].empty()) os << "no GM images (aperiodic)\n";
  } else if (cmd == "flow-verify") {
    if (res["flow"].get<bool>()) os << "flow verified over " << res["states"] << " states\n";
    else os << "not a flow: condition " << res["condition"] << ": " << str(res["message"]) << '\n';
  } else if (cmd == "divides") {
    const ojson& t = b["target"];
    os << "target order " << t["order"] << ": ";
    if (res["divides"].is_null()) os << "unknown within " << res["nodes"] << " nodes\n";
    else os << (res["divides"].get<bool>() ? "divides" : "does not divide") << '\n';
  }
  if (b["status"] == "bounds-only") os << "status: bounds-only (budget)\n";
  return os.str();
}

}  // namespace kr
