#include "acem/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "acem/error.hpp"
#include "format.hpp"

namespace acem {

namespace {

const char* iteration_matrix_name(IterationMatrix m) {
  switch (m) {
    case IterationMatrix::consistent:
      return "consistent";
    case IterationMatrix::paper:
      return "paper";
    case IterationMatrix::fixed_normal:
      return "fixed_normal";
  }
  return "consistent";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + what);
  }

  double number(int line, const std::string& tok) const {
    const std::string t = lower(trim(tok));
    if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || std::isnan(v)) {
      fail(line, "expected a number, got '" + tok + "'");
    }
    return v;
  }

  long integer(int line, const std::string& tok) const {
    const std::string t = trim(tok);
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
      fail(line, "expected an integer, got '" + tok + "'");
    }
    return v;
  }

  bool flag(int line, const std::string& tok) const {
    const std::string t = lower(trim(tok));
    if (t == "on" || t == "true" || t == "yes" || t == "1") return true;
    if (t == "off" || t == "false" || t == "no" || t == "0") return false;
    fail(line, "expected on|off, got '" + tok + "'");
  }

 private:
  std::string source_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

struct MaterialDraft {
  Material mat;
  int line = 0;
  unsigned seen = 0;  // bits E, nu, ft, Gf
};

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source_name, const std::filesystem::path& base_dir) {
  Reader rd(source_name);
  RunConfig cfg;
  std::map<int, MaterialDraft> materials;
  std::string section;
  int material_id = -1;
  std::string raw;
  int number = 0;
  double delta_d = 0.0;
  long steps = -1;
  int delta_line = 0;
  bool have_schedule = false;

  while (std::getline(in, raw)) {
    ++number;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') rd.fail(number, "unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      material_id = -1;
      if (section.rfind("material.", 0) == 0) {
        material_id = static_cast<int>(rd.integer(number, section.substr(9)));
        if (material_id < 0) rd.fail(number, "material id must be non-negative");
        if (materials.count(material_id)) rd.fail(number, "duplicate material " + std::to_string(material_id));
        materials[material_id].line = number;
        section = "material";
      } else if (section != "model" && section != "loading" && section != "adaptive" && section != "solver" &&
                 section != "embedded_cracks" && section != "output") {
        rd.fail(number, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) rd.fail(number, "expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) rd.fail(number, "key '" + key + "' before any section header");
    if (value.empty()) rd.fail(number, "empty value for '" + key + "'");

    if (section == "model") {
      if (key != "mesh") rd.fail(number, "unknown key '" + key + "' in [model]");
      cfg.mesh = resolve(base_dir, value);
    } else if (section == "material") {
      MaterialDraft& m = materials[material_id];
      const double v = rd.number(number, value);
      if (key == "e") {
        m.mat.E = v;
        m.seen |= 1u;
      } else if (key == "nu") {
        m.mat.nu = v;
        m.seen |= 2u;
      } else if (key == "ft") {
        m.mat.ft = v;
        m.seen |= 4u;
      } else if (key == "gf") {
        m.mat.Gf = v;
        m.seen |= 8u;
      } else {
        rd.fail(number, "unknown key '" + key + "' in [material]");
      }
    } else if (section == "loading") {
      if (key == "delta_d") {
        delta_d = rd.number(number, value);
        if (!(delta_d > 0.0) || !std::isfinite(delta_d)) rd.fail(number, "delta_d must be positive");
        delta_line = number;
      } else if (key == "steps") {
        steps = rd.integer(number, value);
        if (steps < 0) rd.fail(number, "steps must be non-negative");
      } else if (key == "schedule") {
        have_schedule = true;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) rd.fail(number, "schedule items must be 'delta:count'");
          const double dd = rd.number(number, item.substr(0, colon));
          const long count = rd.integer(number, item.substr(colon + 1));
          if (!(dd > 0.0) || !std::isfinite(dd)) rd.fail(number, "schedule increments must be positive");
          if (count < 0) rd.fail(number, "schedule counts must be non-negative");
          cfg.schedule.insert(cfg.schedule.end(), static_cast<std::size_t>(count), dd);
        }
      } else {
        rd.fail(number, "unknown key '" + key + "' in [loading]");
      }
    } else if (section == "adaptive") {
      if (key == "adaptive_level" || key == "level") {
        const long lv = rd.integer(number, value);
        if (lv < 0 || lv > 2) rd.fail(number, "adaptive_level must be 0, 1 or 2");
        cfg.model.level = static_cast<AdaptiveLevel>(lv);
      } else if (key == "freeze_normal") {
        cfg.model.freeze_normal = rd.flag(number, value);
      } else if (key == "eig_shear_convention") {
        const std::string v = lower(value);
        if (v == "tensor") {
          cfg.model.shear_convention = ShearConvention::tensor;
        } else if (v == "as_printed") {
          cfg.model.shear_convention = ShearConvention::as_printed;
        } else {
          rd.fail(number, "eig_shear_convention must be tensor|as_printed");
        }
      } else {
        rd.fail(number, "unknown key '" + key + "' in [adaptive]");
      }
    } else if (section == "solver") {
      if (key == "tol_rel") {
        cfg.solver.tol_rel = rd.number(number, value);
        if (!(cfg.solver.tol_rel > 0.0)) rd.fail(number, "tol_rel must be positive");
      } else if (key == "tol_abs_factor") {
        cfg.solver.tol_abs_factor = rd.number(number, value);
        if (!(cfg.solver.tol_abs_factor >= 0.0)) rd.fail(number, "tol_abs_factor must be non-negative");
      } else if (key == "max_iter") {
        cfg.solver.max_iter = static_cast<int>(rd.integer(number, value));
        if (cfg.solver.max_iter < 1) rd.fail(number, "max_iter must be at least 1");
      } else if (key == "max_bisections") {
        cfg.solver.max_bisections = static_cast<int>(rd.integer(number, value));
        if (cfg.solver.max_bisections < 0) rd.fail(number, "max_bisections must be non-negative");
      } else if (key == "stabilization") {
        cfg.solver.stabilization = rd.number(number, value);
        if (!(cfg.solver.stabilization >= 0.0) || !std::isfinite(cfg.solver.stabilization)) {
          rd.fail(number, "stabilization must be non-negative");
        }
      } else if (key == "iteration_matrix") {
        const std::string v = lower(value);
        if (v == "consistent") {
          cfg.solver.iteration_matrix = IterationMatrix::consistent;
        } else if (v == "paper") {
          cfg.solver.iteration_matrix = IterationMatrix::paper;
        } else if (v == "fixed_normal") {
          cfg.solver.iteration_matrix = IterationMatrix::fixed_normal;
        } else {
          rd.fail(number, "iteration_matrix must be consistent|paper|fixed_normal");
        }
      } else {
        rd.fail(number, "unknown key '" + key + "' in [solver]");
      }
    } else if (section == "embedded_cracks") {
      if (key != "crack") rd.fail(number, "unknown key '" + key + "' in [embedded_cracks]");
      std::istringstream ss(value);
      std::string e, a, o, extra;
      if (!(ss >> e >> a >> o) || (ss >> extra)) rd.fail(number, "crack must be 'element angle_deg opening'");
      EmbeddedCrack c;
      c.element = static_cast<ElementId>(rd.integer(number, e));
      c.angle_deg = rd.number(number, a);
      c.opening = rd.number(number, o);
      if (c.element < 0) rd.fail(number, "crack element must be non-negative");
      if (!(c.opening > 0.0) || !std::isfinite(c.opening)) rd.fail(number, "crack opening must be positive");
      cfg.embedded_cracks.push_back(c);
    } else if (section == "output") {
      if (key == "dir") {
        cfg.output_dir = resolve(base_dir, value);
      } else if (key == "vtk_every") {
        cfg.vtk_every = static_cast<int>(rd.integer(number, value));
        if (cfg.vtk_every < 0) rd.fail(number, "vtk_every must be non-negative");
      } else {
        rd.fail(number, "unknown key '" + key + "' in [output]");
      }
    }
  }

  if (cfg.mesh.empty()) rd.fail(number, "missing 'mesh' in [model]");
  if (materials.empty()) rd.fail(number, "no [material.N] section");
  int expected = 0;
  for (auto& [id, m] : materials) {
    if (id != expected++) rd.fail(m.line, "material ids must be contiguous from 0");
    if (m.seen != 15u) rd.fail(m.line, "material needs E, nu, ft and Gf");
    try {
      m.mat.validate();
    } catch (const ConfigError& err) {
      rd.fail(m.line, err.what());
    }
    cfg.materials.push_back(m.mat);
  }
  if (!have_schedule) {
    if (delta_line == 0) rd.fail(number, "missing 'delta_d' in [loading]");
    if (steps < 0) rd.fail(delta_line, "missing 'steps' in [loading]");
    cfg.schedule.assign(static_cast<std::size_t>(steps), delta_d);
  } else if (delta_line != 0) {
    rd.fail(delta_line, "give either 'schedule' or 'delta_d'/'steps', not both");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  RunConfig cfg = parse_config(in, path.string(), path.parent_path());
  if (!std::filesystem::is_regular_file(cfg.mesh)) {
    throw ConfigError(path.string() + ": mesh file '" + cfg.mesh.string() + "' does not exist");
  }
  return cfg;
}

void write_config(const RunConfig& cfg, std::ostream& out) {
  using detail::shortest;
  out << "[model]\nmesh = " << cfg.mesh.generic_string() << "\n";
  for (std::size_t i = 0; i < cfg.materials.size(); ++i) {
    const Material& m = cfg.materials[i];
    out << "\n[material." << i << "]\nE = " << shortest(m.E) << "\nnu = " << shortest(m.nu)
        << "\nft = " << shortest(m.ft) << "\nGf = " << shortest(m.Gf) << "\n";
  }
  out << "\n[loading]\nschedule = ";
  for (std::size_t i = 0; i < cfg.schedule.size();) {
    std::size_t j = i;
    while (j < cfg.schedule.size() && cfg.schedule[j] == cfg.schedule[i]) ++j;
    out << (i ? ", " : "") << shortest(cfg.schedule[i]) << ":" << (j - i);
    i = j;
  }
  if (cfg.schedule.empty()) out << "1:0";
  out << "\n\n[adaptive]\nadaptive_level = " << static_cast<int>(cfg.model.level)
      << "\nfreeze_normal = " << (cfg.model.freeze_normal ? "on" : "off") << "\neig_shear_convention = "
      << (cfg.model.shear_convention == ShearConvention::tensor ? "tensor" : "as_printed") << "\n";
  out << "\n[solver]\ntol_rel = " << shortest(cfg.solver.tol_rel)
      << "\ntol_abs_factor = " << shortest(cfg.solver.tol_abs_factor)
      << "\nmax_iter = " << cfg.solver.max_iter << "\nmax_bisections = " << cfg.solver.max_bisections << "\niteration_matrix = "
      << iteration_matrix_name(cfg.solver.iteration_matrix)
      << "\nstabilization = " << shortest(cfg.solver.stabilization) << "\n";
  if (!cfg.embedded_cracks.empty()) {
    out << "\n[embedded_cracks]\n";
    for (const EmbeddedCrack& c : cfg.embedded_cracks) {
      out << "crack = " << c.element << " " << shortest(c.angle_deg) << " " << shortest(c.opening) << "\n";
    }
  }
  out << "\n[output]\ndir = " << cfg.output_dir.generic_string() << "\nvtk_every = " << cfg.vtk_every << "\n";
}

}  // namespace acem
