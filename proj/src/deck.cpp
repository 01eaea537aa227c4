#include "fimsim/deck.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fimsim/error.hpp"

namespace fimsim {

namespace {

struct Token {
  std::string text;
  std::size_t line;
  bool line_start;
};

const std::set<std::string> kKeywords = {
    "DIMENS", "DX",      "DY",    "DZ",       "TOPS",    "PERMX",    "PERMY",   "PERMZ",  "PORO",
    "ROCK",   "PVTO",    "PVTW",  "DENSITY",  "SWOF",    "EQUIL",    "WELSPECS", "COMPDAT", "SCHEDULE",
    "SOLVER", "TIMESTEP", "ENDTIME", "RPTTIMES", "END"};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view ln = text.substr(pos, eol - pos);
    ++line;
    if (const auto c = ln.find("--"); c != std::string_view::npos) ln = ln.substr(0, c);
    bool first = true;
    std::size_t i = 0;
    while (i < ln.size()) {
      while (i < ln.size() && std::isspace(static_cast<unsigned char>(ln[i]))) ++i;
      if (i >= ln.size()) break;
      if (ln[i] == '/') {
        out.push_back({"/", line, first});
        first = false;
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < ln.size() && !std::isspace(static_cast<unsigned char>(ln[j])) && ln[j] != '/') ++j;
      out.push_back({std::string(ln.substr(i, j - i)), line, first});
      first = false;
      i = j;
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool is_keyword(const Token& t) { return t.line_start && kKeywords.count(t.text) > 0; }

double to_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw DeckError("malformed number '" + s + "'", line);
  return v;
}

int to_int(const std::string& s, std::size_t line) {
  const double v = to_number(s, line);
  if (v != static_cast<double>(static_cast<long long>(v))) throw DeckError("expected an integer, got '" + s + "'", line);
  return static_cast<int>(v);
}

class Reader {
 public:
  Reader(std::vector<Token> tokens, std::filesystem::path base) : t_(std::move(tokens)), base_(std::move(base)) {}

  bool done() const { return i_ >= t_.size(); }
  const Token& peek() const { return t_[i_]; }
  Token next() {
    if (done()) throw DeckError("unexpected end of deck", t_.empty() ? 0 : t_.back().line);
    return t_[i_++];
  }

  // Raw tokens of one record up to "/". Throws if a keyword or EOF comes first.
  std::vector<Token> record(const std::string& kw) {
    std::vector<Token> rec;
    while (true) {
      if (done()) throw DeckError(kw + ": record not terminated by '/'", t_.empty() ? 0 : t_.back().line);
      const Token& tok = peek();
      if (tok.text == "/") {
        ++i_;
        return rec;
      }
      if (is_keyword(tok)) throw DeckError(kw + ": record not terminated by '/'", tok.line);
      rec.push_back(next());
    }
  }

  // Records until an empty record ("/" alone).
  std::vector<std::vector<Token>> records(const std::string& kw) {
    std::vector<std::vector<Token>> out;
    while (true) {
      auto rec = record(kw);
      if (rec.empty()) return out;
      out.push_back(std::move(rec));
    }
  }

  // Numbers of one record with N*v expansion, or a FILE reference.
  std::vector<double> numbers(const std::string& kw) {
    const auto rec = record(kw);
    if (!rec.empty() && upper(rec[0].text) == "FILE") {
      if (rec.size() != 2) throw DeckError(kw + ": FILE expects one path", rec[0].line);
      return read_file(kw, rec[1]);
    }
    return expand(kw, rec);
  }

  std::size_t line() const { return done() ? (t_.empty() ? 0 : t_.back().line) : peek().line; }

  static std::vector<double> expand(const std::string& kw, const std::vector<Token>& rec) {
    std::vector<double> v;
    for (const auto& tok : rec) {
      if (const auto star = tok.text.find('*'); star != std::string::npos) {
        const int count = to_int(tok.text.substr(0, star), tok.line);
        if (count < 1) throw DeckError(kw + ": repeat count must be positive", tok.line);
        const double value = to_number(tok.text.substr(star + 1), tok.line);
        v.insert(v.end(), static_cast<std::size_t>(count), value);
      } else {
        v.push_back(to_number(tok.text, tok.line));
      }
    }
    return v;
  }

 private:
  std::vector<double> read_file(const std::string& kw, const Token& path_tok) {
    const auto path = base_ / path_tok.text;
    std::ifstream in(path);
    if (!in) throw DeckError(kw + ": cannot open " + path.string(), path_tok.line);
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<Token> rec;
    std::string word;
    while (ss >> word) rec.push_back({word, path_tok.line, false});
    return expand(kw, rec);
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  std::filesystem::path base_;
};

void expect_count(const std::string& kw, const std::vector<double>& v, std::size_t n, std::size_t line) {
  if (v.size() != n)
    throw DeckError(kw + ": expected " + std::to_string(n) + " values, got " + std::to_string(v.size()), line);
}

PhasePvt parse_pvt(const std::string& kw, Reader& r) {
  const std::size_t line = r.line();
  const auto v = r.numbers(kw);
  expect_count(kw, v, 4, line);
  PhasePvt p;
  p.p_ref = v[0];
  p.compressibility = v[1];
  p.mu_ref = v[2];
  p.mu_slope = v[3];
  if (!(p.mu_ref > 0.0)) throw DeckError(kw + ": reference viscosity must be positive", line);
  return p;
}

ControlMode parse_mode(const std::string& s, std::size_t line) {
  const auto u = upper(s);
  if (u == "BHP") return ControlMode::Bhp;
  if (u == "ORAT") return ControlMode::OilRate;
  if (u == "WRAT") return ControlMode::WaterRate;
  if (u == "LRAT") return ControlMode::LiquidRate;
  if (u == "SHUTIN") return ControlMode::ShutIn;
  if (u == "STOP") return ControlMode::Stop;
  throw DeckError("unknown control mode '" + s + "'", line);
}

struct WellExtra {
  double bhp_limit = 0.0;
  ControlMode default_rate = ControlMode::OilRate;
  std::optional<ControlMode> last_rate;
};

void parse_key_values(const std::string& kw, Reader& r, SolverConfig& cfg) {
  for (const auto& rec : r.records(kw)) {
    if (rec.size() != 2) throw DeckError(kw + ": expected 'key value'", rec[0].line);
    const std::string key = upper(rec[0].text);
    const std::string val = rec[1].text;
    const std::string uval = upper(val);
    const std::size_t line = rec[0].line;
    auto num = [&] { return to_number(val, line); };
    auto count = [&] {
      const int n = to_int(val, line);
      if (n < 0) throw DeckError(kw + ": " + key + " must be non-negative", line);
      return static_cast<std::size_t>(n);
    };
    if (kw == "TIMESTEP") {
      auto& ts = cfg.timestep;
      if (key == "INIT") ts.dt_init = num();
      else if (key == "MAX") ts.dt_max = num();
      else if (key == "MIN") ts.dt_min = num();
      else if (key == "GROWTH") ts.growth = num();
      else if (key == "CUT") ts.cut = num();
      else throw DeckError("TIMESTEP: unknown key " + key, line);
      continue;
    }
    auto& nl = cfg.newton;
    auto& ls = cfg.linear;
    if (key == "NEWTON") {
      if (uval == "STANDARD") nl.mode = NewtonMode::Standard;
      else if (uval == "INEXACT") nl.mode = NewtonMode::Inexact;
      else throw DeckError("SOLVER: NEWTON must be STANDARD or INEXACT", line);
    } else if (key == "NLTOL") nl.epsilon = num();
    else if (key == "MBTOL") nl.mb_tolerance = num();
    else if (key == "MAX_NEWTON") nl.max_newton = count();
    else if (key == "FORCING") nl.forcing_variant = to_int(val, line);
    else if (key == "ETA_MIN") nl.eta_min = num();
    else if (key == "ETA_MAX") nl.eta_max = num();
    else if (key == "LINTOL") nl.linear_tol_fixed = num();
    else if (key == "KRYLOV") {
      if (uval == "BICGSTAB") ls.krylov = KrylovKind::Bicgstab;
      else if (uval == "GMRES") ls.krylov = KrylovKind::Gmres;
      else throw DeckError("SOLVER: KRYLOV must be BICGSTAB or GMRES", line);
    } else if (key == "RESTART") ls.restart = count();
    else if (key == "MAX_LINEAR") ls.max_iter = count();
    else if (key == "PRECOND") {
      if (uval == "NONE") ls.precond = PrecondKind::None;
      else if (uval == "RAS") ls.precond = PrecondKind::Ras;
      else if (uval == "CPR-FPF") ls.precond = PrecondKind::CprFpf;
      else throw DeckError("SOLVER: PRECOND must be NONE, RAS or CPR-FPF", line);
    } else if (key == "OVERLAP") ls.overlap = static_cast<int>(count());
    else if (key == "DECOUPLING") {
      if (uval == "NONE") ls.decoupling = DecouplingKind::None;
      else if (uval == "QI") ls.decoupling = DecouplingKind::QuasiImpes;
      else if (uval == "ABF") ls.decoupling = DecouplingKind::Abf;
      else throw DeckError("SOLVER: DECOUPLING must be NONE, QI or ABF", line);
    } else if (key == "REORDER") {
      if (uval == "ON") ls.reorder = true;
      else if (uval == "OFF") ls.reorder = false;
      else throw DeckError("SOLVER: REORDER must be ON or OFF", line);
    } else {
      throw DeckError("SOLVER: unknown key " + key, line);
    }
  }
}

}  // namespace

Deck parse_deck(std::string_view text, const std::filesystem::path& base_dir) {
  Reader r(tokenize(text), base_dir);
  Deck deck;
  bool have_dimens = false, have_density = false, have_pvto = false, have_pvtw = false, have_swof = false;
  std::map<std::string, std::size_t> well_pos;
  std::vector<WellExtra> extra;
  std::size_t swof_line = 0;

  while (!r.done()) {
    const Token kw_tok = r.next();
    const std::string kw = kw_tok.text;
    if (!is_keyword(kw_tok)) {
      if (kw_tok.line_start && std::all_of(kw.begin(), kw.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_'; }) && std::isupper(static_cast<unsigned char>(kw[0]))) {
        deck.warnings.push_back("line " + std::to_string(kw_tok.line) + ": unknown keyword " + kw + " ignored");
        while (!r.done() && !is_keyword(r.peek())) r.next();
        continue;
      }
      throw DeckError("expected a keyword, got '" + kw + "'", kw_tok.line);
    }
    const std::size_t line = kw_tok.line;

    if (kw == "END") break;
    if (kw == "DIMENS") {
      const auto v = r.numbers(kw);
      expect_count(kw, v, 3, line);
      for (double d : v)
        if (d < 1 || d != static_cast<double>(static_cast<int>(d))) throw DeckError("DIMENS: counts must be positive integers", line);
      deck.geometry.nx = static_cast<int>(v[0]);
      deck.geometry.ny = static_cast<int>(v[1]);
      deck.geometry.nz = static_cast<int>(v[2]);
      have_dimens = true;
    } else if (kw == "DX") deck.geometry.dx = r.numbers(kw);
    else if (kw == "DY") deck.geometry.dy = r.numbers(kw);
    else if (kw == "DZ") deck.geometry.dz = r.numbers(kw);
    else if (kw == "TOPS") {
      const auto v = r.numbers(kw);
      expect_count(kw, v, 1, line);
      deck.geometry.top_depth = v[0];
    } else if (kw == "PERMX") deck.geometry.permx = r.numbers(kw);
    else if (kw == "PERMY") deck.geometry.permy = r.numbers(kw);
    else if (kw == "PERMZ") deck.geometry.permz = r.numbers(kw);
    else if (kw == "PORO") deck.geometry.poro = r.numbers(kw);
    else if (kw == "ROCK") {
      const auto v = r.numbers(kw);
      expect_count(kw, v, 2, line);
      if (v[0] < 0.0) throw DeckError("ROCK: compressibility must be non-negative", line);
      deck.fluid.rock = {v[0], v[1]};
    } else if (kw == "PVTO") {
      const double rho = deck.fluid.oil.rho_ref;
      deck.fluid.oil = parse_pvt(kw, r);
      deck.fluid.oil.rho_ref = rho;
      have_pvto = true;
    } else if (kw == "PVTW") {
      const double rho = deck.fluid.water.rho_ref;
      deck.fluid.water = parse_pvt(kw, r);
      deck.fluid.water.rho_ref = rho;
      have_pvtw = true;
    } else if (kw == "DENSITY") {
      const auto v = r.numbers(kw);
      if (v.size() != 2 && v.size() != 3) throw DeckError("DENSITY: expected oil, water and optional gas density", line);
      if (!(v[0] > 0.0 && v[1] > 0.0)) throw DeckError("DENSITY: densities must be positive", line);
      deck.fluid.oil.rho_ref = v[0];
      deck.fluid.water.rho_ref = v[1];
      if (v.size() == 3) {
        deck.gas_density = v[2];
        deck.warnings.push_back("line " + std::to_string(line) + ": gas density read but unused by the oil-water model");
      }
      have_density = true;
    } else if (kw == "SWOF") {
      const auto v = r.numbers(kw);
      if (v.size() % 4 != 0 || v.empty()) throw DeckError("SWOF: rows need four columns (sw krw kro pc)", line);
      std::vector<double> sw, krw, kro, pc;
      for (std::size_t q = 0; q < v.size(); q += 4) {
        sw.push_back(v[q]);
        krw.push_back(v[q + 1]);
        kro.push_back(v[q + 2]);
        pc.push_back(v[q + 3]);
      }
      try {
        deck.fluid.sat = SatFunctionTable(sw, krw, kro, pc);
      } catch (const PropertyError& e) {
        throw DeckError(std::string("SWOF: ") + e.what(), line);
      }
      have_swof = true;
      swof_line = line;
    } else if (kw == "EQUIL") {
      const auto v = r.numbers(kw);
      expect_count(kw, v, 3, line);
      deck.equil = EquilibriumSpec{v[0], v[1], v[2]};
    } else if (kw == "WELSPECS") {
      for (const auto& rec : r.records(kw)) {
        if (rec.size() != 4 && rec.size() != 5)
          throw DeckError("WELSPECS: expected 'name INJ|PROD ref_depth bhp_limit [rate_mode]'", rec[0].line);
        WellSpec w;
        w.name = rec[0].text;
        const auto type = upper(rec[1].text);
        WellExtra ex;
        if (type == "INJ") {
          w.type = WellType::Injector;
          ex.default_rate = ControlMode::WaterRate;
        } else if (type == "PROD") {
          w.type = WellType::Producer;
          ex.default_rate = ControlMode::OilRate;
        } else {
          throw DeckError("WELSPECS: well type must be INJ or PROD", rec[1].line);
        }
        w.ref_depth = to_number(rec[2].text, rec[2].line);
        ex.bhp_limit = to_number(rec[3].text, rec[3].line);
        if (rec.size() == 5) {
          ex.default_rate = parse_mode(rec[4].text, rec[4].line);
          if (!is_rate_mode(ex.default_rate)) throw DeckError("WELSPECS: default mode must be a rate mode", rec[4].line);
        }
        if (well_pos.count(w.name)) throw DeckError("WELSPECS: duplicate well " + w.name, rec[0].line);
        well_pos[w.name] = deck.wells.size();
        deck.wells.push_back(std::move(w));
        extra.push_back(ex);
      }
    } else if (kw == "COMPDAT") {
      for (const auto& rec : r.records(kw)) {
        if (rec.size() != 6) throw DeckError("COMPDAT: expected 'well i j k WI|RADIUS value'", rec[0].line);
        if (!well_pos.count(rec[0].text)) throw DeckError("COMPDAT: unknown well " + rec[0].text, rec[0].line);
        Completion c;
        c.well = rec[0].text;
        c.i = to_int(rec[1].text, rec[1].line) - 1;
        c.j = to_int(rec[2].text, rec[2].line) - 1;
        c.k = to_int(rec[3].text, rec[3].line) - 1;
        c.line = rec[0].line;
        if (have_dimens && (c.i < 0 || c.j < 0 || c.k < 0 || c.i >= deck.geometry.nx || c.j >= deck.geometry.ny ||
                            c.k >= deck.geometry.nz))
          throw DeckError("COMPDAT: cell (" + rec[1].text + "," + rec[2].text + "," + rec[3].text + ") outside the grid",
                          rec[0].line);
        const auto kind = upper(rec[4].text);
        const double value = to_number(rec[5].text, rec[5].line);
        if (!(value > 0.0)) throw DeckError("COMPDAT: " + kind + " must be positive", rec[5].line);
        if (kind == "WI") c.well_index = value;
        else if (kind == "RADIUS") c.radius = value;
        else throw DeckError("COMPDAT: expected WI or RADIUS", rec[4].line);
        deck.completions.push_back(c);
      }
    } else if (kw == "SCHEDULE") {
      for (const auto& rec : r.records(kw)) {
        if (rec.size() < 3 || rec.size() > 4)
          throw DeckError("SCHEDULE: expected 'time well [mode] [target]'", rec[0].line);
        const std::size_t ln = rec[0].line;
        const double t = to_number(rec[0].text, ln);
        if (t < 0.0) throw DeckError("SCHEDULE: negative time", ln);
        if (!well_pos.count(rec[1].text)) throw DeckError("SCHEDULE: unknown well " + rec[1].text, ln);
        const std::size_t wi = well_pos[rec[1].text];
        auto& well = deck.wells[wi];
        auto& ex = extra[wi];
        if (!well.schedule.empty() && !(t > well.schedule.back().start))
          throw DeckError("SCHEDULE: times for well " + well.name + " must increase", ln);

        WellControl ctl;
        ctl.bhp_limit = ex.bhp_limit;
        const std::string word = upper(rec[2].text);
        if (word == "UNCHANGED") {
          if (rec.size() != 3) throw DeckError("SCHEDULE: UNCHANGED takes no target", ln);
          if (well.schedule.empty()) throw DeckError("SCHEDULE: UNCHANGED before any control of " + well.name, ln);
          ctl = well.schedule.back().control;
        } else if (std::isdigit(static_cast<unsigned char>(word[0])) || word[0] == '.' || word[0] == '-' || word[0] == '+') {
          if (rec.size() != 3) throw DeckError("SCHEDULE: unexpected token after target", ln);
          ctl.mode = ex.last_rate.value_or(ex.default_rate);
          ctl.target = to_number(rec[2].text, ln);
        } else {
          ctl.mode = parse_mode(rec[2].text, ln);
          const bool needs_target = ctl.mode != ControlMode::ShutIn && ctl.mode != ControlMode::Stop;
          if (needs_target != (rec.size() == 4))
            throw DeckError(needs_target ? "SCHEDULE: mode needs a target" : "SCHEDULE: SHUTIN/STOP take no target", ln);
          if (needs_target) ctl.target = to_number(rec[3].text, ln);
        }
        if (well.type == WellType::Injector && ctl.mode == ControlMode::OilRate)
          throw DeckError("SCHEDULE: injector " + well.name + " cannot use ORAT", ln);
        if (is_rate_mode(ctl.mode)) {
          if (ctl.target < 0.0) throw DeckError("SCHEDULE: rate targets are magnitudes and must be non-negative", ln);
          ex.last_rate = ctl.mode;
        }
        well.schedule.push_back({t, ctl});
      }
    } else if (kw == "SOLVER" || kw == "TIMESTEP") {
      parse_key_values(kw, r, deck.solver);
    } else if (kw == "ENDTIME") {
      const auto v = r.numbers(kw);
      expect_count(kw, v, 1, line);
      if (v[0] < 0.0) throw DeckError("ENDTIME: must be non-negative", line);
      deck.end_time = v[0];
    } else if (kw == "RPTTIMES") {
      deck.report_times = r.numbers(kw);
      if (!std::is_sorted(deck.report_times.begin(), deck.report_times.end()))
        throw DeckError("RPTTIMES: times must be sorted", line);
    }
  }

  if (!have_dimens) throw DeckError("missing DIMENS", 0);
  if (deck.geometry.dx.empty()) throw DeckError("missing DX", 0);
  if (deck.geometry.dy.empty()) throw DeckError("missing DY", 0);
  if (deck.geometry.dz.empty()) throw DeckError("missing DZ", 0);
  if (!deck.geometry.top_depth) throw DeckError("missing TOPS", 0);
  if (deck.geometry.permx.empty()) throw DeckError("missing PERMX", 0);
  if (deck.geometry.poro.empty()) throw DeckError("missing PORO", 0);
  if (!have_density) throw DeckError("missing DENSITY", 0);
  if (!have_pvto) throw DeckError("missing PVTO", 0);
  if (!have_pvtw) throw DeckError("missing PVTW", 0);
  if (!have_swof) throw DeckError("missing SWOF", 0);
  if (!deck.equil) throw DeckError("missing EQUIL", 0);
  (void)swof_line;

  for (const auto& w : deck.wells) {
    if (std::none_of(deck.completions.begin(), deck.completions.end(), [&](const Completion& c) { return c.well == w.name; }))
      throw DeckError("well " + w.name + " has no COMPDAT entry", 0);
  }
  try {
    deck.solver.newton.validate();
    deck.solver.timestep.validate();
  } catch (const Error& e) {
    throw DeckError(e.what(), 0);
  }
  return deck;
}

Deck load_deck(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DeckError("cannot open deck " + path.string(), 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_deck(ss.str(), path.parent_path());
}

ReservoirModel build_model(const Deck& deck) {
  ReservoirModel model;
  model.grid = build_grid(deck.geometry);
  model.fluid = deck.fluid;
  model.wells = deck.wells;
  for (const auto& c : deck.completions) {
    auto it = std::find_if(model.wells.begin(), model.wells.end(), [&](const WellSpec& w) { return w.name == c.well; });
    if (it == model.wells.end()) throw DeckError("COMPDAT: unknown well " + c.well, c.line);
    if (c.i < 0 || c.j < 0 || c.k < 0 || c.i >= model.grid.nx() || c.j >= model.grid.ny() || c.k >= model.grid.nz())
      throw DeckError("COMPDAT: cell outside the grid", c.line);
    Perforation p;
    p.cell = model.grid.index(c.i, c.j, c.k);
    p.depth = model.grid.depth(p.cell);
    try {
      p.well_index = c.well_index ? *c.well_index : peaceman_well_index(model.grid, p.cell, *c.radius);
    } catch (const WellError& e) {
      throw DeckError(std::string("COMPDAT: ") + e.what(), c.line);
    }
    it->perforations.push_back(p);
  }
  return model;
}

}  // namespace fimsim
