#include "wuseq/scenario.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "wuseq/error.hpp"

namespace wuseq {

auto to_string(PhenotypeFamily f) -> std::string_view {
  switch (f) {
    case PhenotypeFamily::BinaryLogistic: return "binary";
    case PhenotypeFamily::Gaussian: return "gaussian";
    case PhenotypeFamily::StudentT2: return "student-t";
    case PhenotypeFamily::Cauchy: return "cauchy";
  }
  return "?";
}

auto to_string(EffectMode m) -> std::string_view {
  switch (m) {
    case EffectMode::Null: return "null";
    case EffectMode::MixedDirection: return "mixed";
    case EffectMode::DeleteriousMajority: return "deleterious";
  }
  return "?";
}

auto parse_family(std::string_view text) -> PhenotypeFamily {
  if (text == "binary") return PhenotypeFamily::BinaryLogistic;
  if (text == "gaussian") return PhenotypeFamily::Gaussian;
  if (text == "student-t") return PhenotypeFamily::StudentT2;
  if (text == "cauchy") return PhenotypeFamily::Cauchy;
  throw InputError("unknown phenotype family '" + std::string(text) + "'");
}

auto parse_effect_mode(std::string_view text) -> EffectMode {
  if (text == "null") return EffectMode::Null;
  if (text == "mixed") return EffectMode::MixedDirection;
  if (text == "deleterious") return EffectMode::DeleteriousMajority;
  throw InputError("unknown effect mode '" + std::string(text) + "'");
}

auto MethodConfig::parse(std::string_view text) -> MethodConfig {
  MethodConfig m;
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  for (std::string part; std::getline(ss, part, '-');) parts.push_back(part);
  if (parts.empty()) throw InputError("empty method name");
  if (parts[0] == "wu") {
    m.kind = Kind::Wu;
  } else if (parts[0] == "baseline") {
    m.kind = Kind::Baseline;
  } else {
    throw InputError("unknown method '" + std::string(text) + "'");
  }
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto& p = parts[k];
    if (p == "unadjusted") {
      m.adjust = false;
    } else if (m.kind == Kind::Wu && p == "rank") {
      m.transform = Transform::Rank;
    } else if (m.kind == Kind::Wu && p == "quantile") {
      m.transform = Transform::Quantile;
    } else if (m.kind == Kind::Wu && (p == "l1" || p == "L1")) {
      m.norm = NormKind::L1;
    } else if (m.kind == Kind::Wu && (p == "l2" || p == "L2")) {
      m.norm = NormKind::L2;
    } else if (m.kind == Kind::Baseline && p == "offdiag") {
      m.baseline = BaselineKind::OffDiagonal;
    } else {
      throw InputError("unknown method option '" + p + "' in '" + std::string(text) + "'");
    }
  }
  return m;
}

auto MethodConfig::label() const -> std::string {
  std::string out;
  if (kind == Kind::Wu) {
    out = "wu";
    if (transform == Transform::Rank) out += "-rank";
    if (norm == NormKind::L1) out += "-l1";
  } else {
    out = "baseline";
    if (baseline == BaselineKind::OffDiagonal) out += "-offdiag";
  }
  if (!adjust) out += "-unadjusted";
  return out;
}

void Scenario::validate() const {
  if (!(pct_functional >= 0.0 && pct_functional <= 0.5)) {
    throw InputError("pct_functional must be in [0, 0.5]");
  }
  if (replicates < 1) throw InputError("replicates must be at least 1");
  if (n < 3) throw InputError("n must be at least 3");
  if (n_variants < 1) throw InputError("n_variants must be at least 1");
  if (!(sigma_beta > 0.0) || !(sigma > 0.0) || !(cauchy_scale > 0.0)) {
    throw InputError("scale parameters must be positive");
  }
  if (!(level > 0.0 && level < 1.0)) throw InputError("level must be in (0, 1)");
  if (!(maf_threshold > 0.0 && maf_threshold <= 0.5)) {
    throw InputError("maf_threshold must be in (0, 0.5]");
  }
  if (methods.empty()) throw InputError("at least one method is required");
}

namespace {

auto trim(const std::string& s) -> std::string {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
auto parse_number(const std::string& key, const std::string& value) -> T {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InputError("invalid value '" + value + "' for key '" + key + "'");
  }
  return out;
}

auto parse_bool(const std::string& key, const std::string& value) -> bool {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InputError("invalid value '" + value + "' for key '" + key + "'");
}

}  // namespace

void apply_scenario_key(Scenario& s, const std::string& key, const std::string& value) {
  auto wrap = [&](auto&& parse) {
    try {
      parse();
    } catch (const InputError& e) {
      const std::string msg = e.what();
      if (msg.find("'" + key + "'") != std::string::npos) throw;
      throw InputError("key '" + key + "': " + msg);
    }
  };
  if (key == "name") {
    s.name = value;
  } else if (key == "phenotype") {
    wrap([&] { s.family = parse_family(value); });
  } else if (key == "effect_mode") {
    wrap([&] { s.effect_mode = parse_effect_mode(value); });
  } else if (key == "pct_functional") {
    s.pct_functional = parse_number<double>(key, value);
  } else if (key == "n") {
    s.n = parse_number<Index>(key, value);
  } else if (key == "n_variants") {
    s.n_variants = parse_number<Index>(key, value);
  } else if (key == "mu_beta") {
    s.mu_beta = parse_number<double>(key, value);
  } else if (key == "sigma_beta") {
    s.sigma_beta = parse_number<double>(key, value);
  } else if (key == "mu") {
    s.mu = parse_number<double>(key, value);
  } else if (key == "sigma") {
    s.sigma = parse_number<double>(key, value);
  } else if (key == "cauchy_scale") {
    s.cauchy_scale = parse_number<double>(key, value);
  } else if (key == "with_covariates") {
    s.with_covariates = parse_bool(key, value);
  } else if (key == "alpha1") {
    s.alpha1 = parse_number<double>(key, value);
  } else if (key == "alpha2") {
    s.alpha2 = parse_number<double>(key, value);
  } else if (key == "replicates") {
    s.replicates = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    s.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "level") {
    s.level = parse_number<double>(key, value);
  } else if (key == "maf_threshold") {
    s.maf_threshold = parse_number<double>(key, value);
  } else if (key == "pool") {
    s.pool = value;
  } else if (key == "methods") {
    wrap([&] {
      std::vector<MethodConfig> methods;
      std::stringstream ss(value);
      for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (!item.empty()) methods.push_back(MethodConfig::parse(item));
      }
      s.methods = std::move(methods);
    });
  } else {
    throw InputError("unknown scenario key '" + key + "'");
  }
}

auto read_scenario(std::istream& in) -> Scenario {
  Scenario s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("scenario line " + std::to_string(line_no) + " is not 'key = value'");
    }
    apply_scenario_key(s, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  s.validate();
  return s;
}

auto load_scenario(const std::filesystem::path& path) -> Scenario {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_scenario(in);
}

}  // namespace wuseq
