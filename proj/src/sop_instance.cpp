#include "moon/sop_instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace moon {

int SopInstance::num_clusters() const {
  int k = 0;
  for (int c : cluster_of) k = std::max(k, c + 1);
  return k;
}

std::vector<std::vector<int>> SopInstance::cluster_members() const {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(num_clusters()));
  for (std::size_t i = 0; i < cluster_of.size(); ++i) {
    members[static_cast<std::size_t>(cluster_of[i])].push_back(static_cast<int>(i));
  }
  return members;
}

double SopInstance::total_reward() const {
  double total = 0.0;
  for (const auto& m : cluster_members()) {
    if (!m.empty()) total += rewards[static_cast<std::size_t>(m.front())];
  }
  return total;
}

void SopInstance::validate() const {
  const std::size_t n = rewards.size();
  if (n == 0) throw InstanceError("instance has no nodes");
  if (detection.size() != n || cluster_of.size() != n || cost.size() != n) {
    throw InstanceError("instance arrays disagree on node count");
  }
  if (start < 0 || static_cast<std::size_t>(start) >= n) throw InstanceError("start node out of range");
  if (end && (*end < 0 || static_cast<std::size_t>(*end) >= n || *end == start)) {
    throw InstanceError("end node out of range or equal to start");
  }
  if (!(budget >= 0.0)) throw InstanceError("budget must be non-negative");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rewards[i] >= 0.0) || !(detection[i] >= 0.0)) throw InstanceError("negative node score");
    if (cluster_of[i] < 0) throw InstanceError("negative cluster id");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(cost(i, j) >= 0.0)) throw InstanceError("negative or NaN edge cost");
    }
  }
  const auto members = cluster_members();
  for (const auto& m : members) {
    if (m.empty()) throw InstanceError("cluster ids are not dense");
    for (int v : m) {
      if (rewards[static_cast<std::size_t>(v)] != rewards[static_cast<std::size_t>(m.front())]) {
        throw InstanceError("rewards differ within a cluster");
      }
      if (detection[static_cast<std::size_t>(v)] != detection[static_cast<std::size_t>(m.front())]) {
        throw InstanceError("detection scores differ within a cluster");
      }
    }
  }
  if (end && cluster_of[static_cast<std::size_t>(*end)] == cluster_of[static_cast<std::size_t>(start)]) {
    throw InstanceError("start and end share a cluster");
  }
}

namespace {

void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << values[i];
  }
  out << '\n';
}

/// Next non-comment, non-blank line split into tokens.
std::vector<std::string> next_tokens(std::istream& in, bool required) {
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    return tokens;
  }
  if (required) throw InstanceError("unexpected end of instance file");
  return {};
}

double parse_double(const std::string& tok) {
  if (tok == "inf" || tok == "Inf" || tok == "INF") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw InstanceError("bad number '" + tok + "'");
  }
  if (used != tok.size()) throw InstanceError("bad number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw InstanceError("bad integer '" + tok + "'");
  }
  if (used != tok.size()) throw InstanceError("bad integer '" + tok + "'");
  return v;
}

std::vector<double> parse_doubles(const std::vector<std::string>& tokens, std::size_t n, std::size_t skip = 0) {
  if (tokens.size() != n + skip) throw InstanceError("expected " + std::to_string(n) + " values");
  std::vector<double> out;
  for (std::size_t i = skip; i < tokens.size(); ++i) out.push_back(parse_double(tokens[i]));
  return out;
}

}  // namespace

void write_instance(std::ostream& out, const SopInstance& inst) {
  const auto old_precision = out.precision(17);
  out << inst.size() << ' ' << inst.budget << ' ' << inst.start;
  if (inst.end) out << ' ' << *inst.end;
  out << '\n';
  write_row(out, inst.rewards);
  for (std::size_t i = 0; i < inst.cluster_of.size(); ++i) {
    if (i) out << ' ';
    out << inst.cluster_of[i];
  }
  out << '\n';
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 0; j < inst.size(); ++j) {
      if (j) out << ' ';
      const double c = inst.cost(i, j);
      if (std::isinf(c)) {
        out << "inf";
      } else {
        out << c;
      }
    }
    out << '\n';
  }
  if (inst.detection != inst.rewards) {
    out << "detection ";
    write_row(out, inst.detection);
  }
  out.precision(old_precision);
}

SopInstance read_instance(std::istream& in) {
  const auto header = next_tokens(in, true);
  if (header.size() < 3 || header.size() > 4) throw InstanceError("header must be: n B s [t]");
  const int n_signed = parse_int(header[0]);
  if (n_signed <= 0) throw InstanceError("node count must be positive");
  const auto n = static_cast<std::size_t>(n_signed);

  SopInstance inst;
  inst.budget = parse_double(header[1]);
  inst.start = parse_int(header[2]);
  if (header.size() == 4) inst.end = parse_int(header[3]);
  inst.rewards = parse_doubles(next_tokens(in, true), n);
  const auto cluster_tokens = next_tokens(in, true);
  if (cluster_tokens.size() != n) throw InstanceError("expected " + std::to_string(n) + " cluster ids");
  for (const auto& t : cluster_tokens) inst.cluster_of.push_back(parse_int(t));
  inst.cost = CostMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = parse_doubles(next_tokens(in, true), n);
    for (std::size_t j = 0; j < n; ++j) inst.cost(i, j) = row[j];
  }
  const auto extra = next_tokens(in, false);
  if (!extra.empty()) {
    if (extra.front() != "detection") throw InstanceError("unexpected trailing line");
    inst.detection = parse_doubles(extra, n, 1);
  } else {
    inst.detection = inst.rewards;
  }
  inst.validate();
  return inst;
}

SopInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file '" + path + "'");
  try {
    return read_instance(in);
  } catch (const InstanceError& e) {
    throw InstanceError(path + ": " + e.what());
  }
}

void save_instance(const std::string& path, const SopInstance& inst) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write instance file '" + path + "'");
  write_instance(out, inst);
}

}  // namespace moon
