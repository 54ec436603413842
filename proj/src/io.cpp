#include "nlpme/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nlpme {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return f;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

void write_step_records_csv(const std::string& path,
                            const std::vector<StepRecord>& recs) {
  auto f = open_out(path);
  f << "step,t,energy,dW2_increment,inner_iters,el_residual,m2,entropy_v,h1_v,wall_ms\n";
  for (const StepRecord& r : recs)
    f << r.step << ',' << fmt17(r.t) << ',' << fmt17(r.energy) << ','
      << fmt17(r.dW2_increment) << ',' << r.inner_iters << ','
      << fmt17(r.el_residual) << ',' << fmt17(r.m2) << ',' << fmt17(r.entropy_v)
      << ',' << fmt17(r.h1_v) << ',' << fmt17(r.wall_ms) << '\n';
}

std::vector<StepRecord> read_step_records_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("step,t,energy", 0) != 0)
    throw std::runtime_error("corrupt step CSV header in " + path);
  std::vector<StepRecord> recs;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 10)
      throw std::runtime_error("corrupt step CSV row in " + path + ": " + line);
    StepRecord r;
    r.step = std::stol(cols[0]);
    r.t = std::stod(cols[1]);
    r.energy = std::stod(cols[2]);
    r.dW2_increment = std::stod(cols[3]);
    r.inner_iters = std::stol(cols[4]);
    r.el_residual = std::stod(cols[5]);
    r.m2 = std::stod(cols[6]);
    r.entropy_v = std::stod(cols[7]);
    r.h1_v = std::stod(cols[8]);
    r.wall_ms = std::stod(cols[9]);
    recs.push_back(r);
  }
  return recs;
}

void write_particles_csv(const std::string& path, const ParticleMeasure& mu) {
  auto f = open_out(path);
  if (mu.dim == 2) {
    f << "id,x,y\n";
    for (int i = 0; i < mu.size(); ++i)
      f << i << ',' << fmt17(mu.xs[static_cast<size_t>(i)]) << ','
        << fmt17(mu.ys[static_cast<size_t>(i)]) << '\n';
  } else {
    f << "id,x\n";
    for (int i = 0; i < mu.size(); ++i)
      f << i << ',' << fmt17(mu.xs[static_cast<size_t>(i)]) << '\n';
  }
}

ParticleMeasure read_particles_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("id,x", 0) != 0)
    throw std::runtime_error("corrupt particle CSV header in " + path);
  const bool two_d = line == "id,x,y";
  ParticleMeasure mu;
  mu.dim = two_d ? 2 : 1;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != (two_d ? 3u : 2u))
      throw std::runtime_error("corrupt particle CSV row: " + line);
    mu.xs.push_back(std::stod(cols[1]));
    if (two_d) mu.ys.push_back(std::stod(cols[2]));
  }
  return mu;
}

void write_grid_csv(const std::string& path, const GridDensity& v) {
  auto f = open_out(path);
  f << "x,value\n";
  for (int k = 0; k < v.m; ++k)
    f << fmt17(v.node(k)) << ',' << fmt17(v.values[static_cast<size_t>(k)]) << '\n';
}

GridDensity read_grid_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("x,value", 0) != 0)
    throw std::runtime_error("corrupt grid CSV header in " + path);
  std::vector<double> xs, vs;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 2) throw std::runtime_error("corrupt grid CSV row: " + line);
    xs.push_back(std::stod(cols[0]));
    vs.push_back(std::stod(cols[1]));
  }
  if (xs.size() < 2) throw std::runtime_error("grid CSV too short: " + path);
  for (size_t k = 1; k < xs.size(); ++k)
    if (!(xs[k] > xs[k - 1]))
      throw std::runtime_error("grid CSV x not increasing: " + path);
  GridDensity v(xs.front(), xs.back(), static_cast<int>(xs.size()));
  v.values = vs;
  return v;
}

void write_sweep_report_csv(const std::string& path, const SweepReport& rep) {
  auto f = open_out(path);
  f << "eps,E_l2,ratio_prev,excess_l1_max,excess_l2,h1_budget_used,verdict\n";
  for (const SweepRow& r : rep.rows)
    f << fmt17(r.eps) << ',' << fmt17(r.E_l2) << ',' << fmt17(r.ratio_prev) << ','
      << fmt17(r.excess_l1_max) << ',' << fmt17(r.excess_l2) << ','
      << fmt17(r.h1_budget_used) << ',' << r.verdict << '\n';
}

void write_sweep_report_json(const std::string& path, const SweepReport& rep) {
  nlohmann::ordered_json j;
  j["pass"] = rep.pass;
  j["rows"] = nlohmann::ordered_json::array();
  for (const SweepRow& r : rep.rows) {
    nlohmann::ordered_json row;
    row["eps"] = r.eps;
    row["E_l2"] = r.E_l2;
    row["ratio_prev"] = r.ratio_prev;
    row["excess_l1_max"] = r.excess_l1_max;
    row["excess_l2"] = r.excess_l2;
    row["h1_budget_used"] = r.h1_budget_used;
    row["verdict"] = r.verdict;
    j["rows"].push_back(row);
  }
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

}  // namespace nlpme
