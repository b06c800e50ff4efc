#include "flatflow/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "flatflow/error.hpp"

namespace flatflow {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    std::size_t end = pos;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
    if (end > pos) out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

bool to_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool to_int(std::string_view s, int& out) {
  s = trim(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class Section { Top, Inflow, Permeability, Porosity };

class Parser {
 public:
  Scenario run(std::string_view text) {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      ++line_no;
      line_ = line_no;
      handle(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
    for (const char* key : {"model", "nx", "nz", "viscosity_ratio", "end_time"}) {
      if (!seen_.count(key)) throw ValidationError(key, std::string("missing: ") + key);
    }
    validate(sc_);
    return sc_;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  double number(std::string_view v, std::string_view key) const {
    double d;
    if (!to_double(v, d)) fail("expected a number for " + std::string(key));
    return d;
  }

  int integer(std::string_view v, std::string_view key) const {
    int n;
    if (!to_int(v, n)) fail("expected an integer for " + std::string(key));
    return n;
  }

  bool boolean(std::string_view v, std::string_view key) const {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("expected true or false for " + std::string(key));
  }

  BrinkmanSpec& brinkman() {
    if (!sc_.brinkman) sc_.brinkman.emplace();
    return *sc_.brinkman;
  }

  void handle(std::string_view raw) {
    const auto hash = raw.find('#');
    const auto line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty()) return;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name == "scenario") section_ = Section::Top;
      else if (name == "inflow") section_ = Section::Inflow;
      else if (name == "permeability") section_ = Section::Permeability;
      else if (name == "porosity") section_ = Section::Porosity;
      else fail("unknown section [" + std::string(name) + "]");
      return;
    }
    const auto eq = line.find('=');
    if (eq != std::string_view::npos) {
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (section_ == Section::Top) {
        top_level(key, value);
      } else if (key == "background") {
        const double v = number(value, key);
        if (section_ == Section::Inflow) sc_.inflow.background = v;
        else if (section_ == Section::Permeability) sc_.permeability.background = v;
        else sc_.porosity.background = v;
      } else {
        fail("unknown key in section: " + std::string(key));
      }
      return;
    }
    if (section_ == Section::Top) fail("expected key = value");
    row(line);
  }

  void row(std::string_view line) {
    std::size_t arrow = line.find("->");
    std::size_t arrow_len = 2;
    if (arrow == std::string_view::npos) {
      arrow = line.find("→");
      arrow_len = std::string_view("→").size();
    }
    if (arrow == std::string_view::npos) fail("expected a row of the form `lo hi -> value`");
    const auto coords = split_ws(line.substr(0, arrow));
    const double value = number(line.substr(arrow + arrow_len), "row value");
    std::vector<double> c;
    for (auto tok : coords) c.push_back(number(tok, "row bounds"));
    if (section_ == Section::Inflow) {
      if (c.size() != 2) fail("inflow rows take `lo hi -> value`");
      sc_.inflow.pieces.push_back({c[0], c[1], value});
      return;
    }
    PlanarProfile& p = section_ == Section::Permeability ? sc_.permeability : sc_.porosity;
    if (c.size() == 2) {
      p.rects.push_back({0.0, 1.0, c[0], c[1], value});
    } else if (c.size() == 4) {
      p.rects.push_back({c[0], c[1], c[2], c[3], value});
    } else {
      fail("planar rows take `z0 z1 -> value` or `x0 x1 z0 z1 -> value`");
    }
  }

  void top_level(std::string_view key, std::string_view value) {
    const std::string k(key);
    if (!seen_.insert(k).second) fail("duplicate key " + k);
    if (k == "model") {
      const auto m = parse_model_kind(value);
      if (!m) fail("unknown model " + std::string(value));
      sc_.model = *m;
    } else if (k == "nx") {
      sc_.nx = integer(value, key);
    } else if (k == "nz") {
      sc_.nz = integer(value, key);
    } else if (k == "gamma") {
      sc_.gamma = number(value, key);
    } else if (k == "viscosity_ratio") {
      sc_.viscosity_ratio = number(value, key);
    } else if (k == "end_time") {
      sc_.end_time = number(value, key);
    } else if (k == "cfl") {
      sc_.cfl_factor = number(value, key);
    } else if (k == "snapshots") {
      sc_.snapshot_times.clear();
      std::size_t pos = 0;
      while (pos <= value.size() && !value.empty()) {
        auto comma = value.find(',', pos);
        if (comma == std::string_view::npos) comma = value.size();
        sc_.snapshot_times.push_back(number(value.substr(pos, comma - pos), key));
        pos = comma + 1;
      }
    } else if (k == "initial") {
      if (value == "zero") sc_.initial = InitialCondition::Zero;
      else if (value == "decay") sc_.initial = InitialCondition::Decay;
      else fail("initial must be zero or decay");
    } else if (k == "pressure_tol") {
      sc_.pressure_tol = number(value, key);
    } else if (k == "helmholtz_tol") {
      sc_.helmholtz_tol = number(value, key);
    } else if (k == "recover_velocity") {
      sc_.recover_velocity = boolean(value, key);
    } else if (k == "mu_e") {
      brinkman().mu_e = number(value, key);
    } else if (k == "height") {
      brinkman().height = number(value, key);
    } else if (k == "length") {
      brinkman().length = number(value, key);
    } else if (k == "beta_x") {
      brinkman().beta_x = number(value, key);
    } else if (k == "beta_z") {
      brinkman().beta_z = number(value, key);
    } else if (k == "eps_x") {
      brinkman().eps_x = number(value, key);
    } else if (k == "eps_z") {
      brinkman().eps_z = number(value, key);
    } else if (k == "brinkman_vertical_only") {
      brinkman().vertical_only = boolean(value, key);
    } else {
      fail("unknown key " + k);
    }
  }

  Scenario sc_;
  Section section_ = Section::Top;
  std::set<std::string> seen_;
  int line_ = 0;
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser().run(text); }

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text(path));
}

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  auto put = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("model", std::string(to_string(s.model)));
  put("nx", std::to_string(s.nx));
  put("nz", std::to_string(s.nz));
  put("gamma", fmt_double(s.gamma));
  put("viscosity_ratio", fmt_double(s.viscosity_ratio));
  put("end_time", fmt_double(s.end_time));
  put("cfl", fmt_double(s.cfl_factor));
  if (!s.snapshot_times.empty()) {
    std::string list;
    for (std::size_t i = 0; i < s.snapshot_times.size(); ++i) {
      if (i) list += ", ";
      list += fmt_double(s.snapshot_times[i]);
    }
    put("snapshots", list);
  }
  if (s.initial) put("initial", *s.initial == InitialCondition::Zero ? "zero" : "decay");
  put("pressure_tol", fmt_double(s.pressure_tol));
  put("helmholtz_tol", fmt_double(s.helmholtz_tol));
  put("recover_velocity", s.recover_velocity ? "true" : "false");
  if (s.brinkman) {
    const auto& b = *s.brinkman;
    if (b.mu_e) put("mu_e", fmt_double(*b.mu_e));
    if (b.height) put("height", fmt_double(*b.height));
    if (b.length) put("length", fmt_double(*b.length));
    if (b.beta_x) put("beta_x", fmt_double(*b.beta_x));
    if (b.beta_z) put("beta_z", fmt_double(*b.beta_z));
    if (b.eps_x) put("eps_x", fmt_double(*b.eps_x));
    if (b.eps_z) put("eps_z", fmt_double(*b.eps_z));
    put("brinkman_vertical_only", b.vertical_only ? "true" : "false");
  }
  out += "\n[inflow]\n";
  put("background", fmt_double(s.inflow.background));
  for (const auto& p : s.inflow.pieces) {
    out += fmt_double(p.lo) + " " + fmt_double(p.hi) + " -> " + fmt_double(p.value) + "\n";
  }
  auto planar = [&](const char* name, const PlanarProfile& p) {
    out += std::string("\n[") + name + "]\n";
    put("background", fmt_double(p.background));
    for (const auto& r : p.rects) {
      out += fmt_double(r.x0) + " " + fmt_double(r.x1) + " " + fmt_double(r.z0) + " " +
             fmt_double(r.z1) + " -> " + fmt_double(r.value) + "\n";
    }
  };
  planar("permeability", s.permeability);
  planar("porosity", s.porosity);
  return out;
}

std::string format_field(const ScalarField& field, double time) {
  const Grid& g = field.grid();
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "# nx=%d nz=%d time=%.16e\n", g.nx(), g.nz(), time);
  out += buf;
  for (int j = 0; j < g.nz(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      std::snprintf(buf, sizeof buf, "%.16e", field(i, j));
      if (i) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_field(const ScalarField& field, double time, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << format_field(field, time);
  if (!f) throw Error("write failed for " + path.string());
}

FieldDump parse_field(std::string_view text) {
  std::size_t pos = 0;
  int line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    return true;
  };

  std::string_view header;
  if (!next_line(header)) throw ParseError(1, "empty field dump");
  int nx = 0;
  int nz = 0;
  double time = 0.0;
  {
    const auto toks = split_ws(trim(header));
    if (toks.size() != 4 || toks[0] != "#" || !toks[1].starts_with("nx=") ||
        !toks[2].starts_with("nz=") || !toks[3].starts_with("time=") ||
        !to_int(toks[1].substr(3), nx) || !to_int(toks[2].substr(3), nz) ||
        !to_double(toks[3].substr(5), time)) {
      throw ParseError(1, "malformed header");
    }
    if (nx < 1 || nz < 1) throw ParseError(1, "grid sizes must be positive");
  }
  const Grid g(nx, nz);
  ScalarField field(g);
  for (int j = 0; j < nz; ++j) {
    std::string_view line;
    if (!next_line(line)) throw ParseError(line_no + 1, "missing layer " + std::to_string(j));
    const auto toks = split_ws(trim(line));
    if (static_cast<int>(toks.size()) != nx) {
      throw ParseError(line_no, "expected " + std::to_string(nx) + " values");
    }
    for (int i = 0; i < nx; ++i) {
      if (!to_double(toks[i], field(i, j))) throw ParseError(line_no, "bad number");
    }
  }
  std::string_view rest;
  while (next_line(rest)) {
    if (!trim(rest).empty()) throw ParseError(line_no, "trailing content");
  }
  return {std::move(field), time};
}

FieldDump read_field(const std::filesystem::path& path) { return parse_field(read_text(path)); }

}  // namespace flatflow
