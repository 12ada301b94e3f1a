/*
 * Copyright 2026 The dcfsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dcfsim/backoff.hpp"
#include "dcfsim/config.hpp"
#include "dcfsim/runner.hpp"

using namespace dcfsim;

namespace {

struct Verdict
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what)
  {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

RunConfig
base_config(ExperimentKind kind, PolicyKind policy, int n_bss = 2)
{
  RunConfig c;
  c.experiment.kind = kind;
  c.experiment.n_bss = n_bss;
  c.experiment.n_sim = 1;
  c.experiment.horizon_s = 100.0;
  c.experiment.master_seed = 1;
  c.policy = policy;
  c.policy_params = PolicyParams{};
  return resolve_config(to_json(c));
}

double
seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<const TxAttempt*>
by_start(const std::vector<TxAttempt>& attempts)
{
  std::vector<const TxAttempt*> out;
  for (const auto& a : attempts) {
    out.push_back(&a);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TxAttempt* a, const TxAttempt* b) { return a->start < b->start; });
  return out;
}

double
median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------

Verdict
backoff_formulas()
{
  Verdict v;
  const PolicyParams p{};
  const std::array<int, 8> expected_cw{16, 32, 64, 128, 256, 512, 512, 512};
  Rng rng(7);
  for (int n = 0; n < 8; ++n) {
    for (int i = 0; i < 2000; ++i) {
      const BackoffDraw d = beb_backoff(n, p, rng);
      if (d.cw_used != expected_cw[n] || d.slots < 0 || d.slots >= expected_cw[n]) {
        v.require(false, "beb n=" + std::to_string(n));
        break;
      }
    }
  }
  for (int ipt = 0; ipt <= 64; ++ipt) {
    const BackoffDraw d = db_backoff(0, ipt, p, rng);
    v.require(d.slots == p.db_base + ipt, "db ipt=" + std::to_string(ipt));
  }
  for (int d = 0; d <= 8; ++d) {
    const int lo = std::max(0, d * 16 - 1);
    const int hi = (d + 1) * 16 - 1;
    ContentionState s = make_contention_state(BssId{1});
    s.token = BssId{1};
    s.token_distance = d;
    int seen_lo = 1 << 30;
    int seen_hi = -1;
    for (int i = 0; i < 4000; ++i) {
      const int b = iyt_backoff(s, p, rng).slots;
      seen_lo = std::min(seen_lo, b);
      seen_hi = std::max(seen_hi, b);
    }
    v.require(seen_lo == lo && seen_hi == hi, "iyt d=" + std::to_string(d));
  }
  v.detail << " beb n=0..7, db ipt=0..64, iyt d=0..8";
  return v;
}

Verdict
beb_uniformity()
{
  Verdict v;
  constexpr int kDraws = 100000;
  constexpr int kBins = 16;
  constexpr double kCritical = 30.578;  // chi-square, 15 dof, upper 1%
  Rng rng(20260101);
  std::array<int, kBins> counts{};
  for (int i = 0; i < kDraws; ++i) {
    ++counts[static_cast<std::size_t>(beb_backoff(0, PolicyParams{}, rng).slots)];
  }
  const double expected = static_cast<double>(kDraws) / kBins;
  double chi2 = 0.0;
  for (int c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  v.require(chi2 < kCritical, "chi2 above critical value");
  v.detail << " chi2=" << chi2 << " critical=" << kCritical;
  return v;
}

Verdict
beb_tie_probability()
{
  Verdict v;
  int ties = 0;
  int pairs = 0;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      ++pairs;
      ties += a == b;
    }
  }
  const double oracle = static_cast<double>(ties) / pairs;
  constexpr int kContentions = 100000;
  Rng rng(99);
  int hit = 0;
  for (int i = 0; i < kContentions; ++i) {
    const int a = beb_backoff(0, PolicyParams{}, rng).slots;
    const int b = beb_backoff(0, PolicyParams{}, rng).slots;
    hit += a == b;
  }
  const double f = static_cast<double>(hit) / kContentions;
  v.require(std::abs(f - oracle) <= 0.005, "tie fraction outside oracle +- 0.005");
  v.detail << " observed=" << f << " oracle=" << oracle;
  return v;
}

Verdict
db_alternation()
{
  Verdict v;
  constexpr int kWarmupTxops = 10;
  for (auto kind : {ExperimentKind::ToyA, ExperimentKind::ToyB, ExperimentKind::Overlap}) {
    const RunConfig c = base_config(kind, PolicyKind::Db, 2);
    const RunResult r = run_single(c, 0);
    const auto order = by_start(r.attempts);
    std::size_t i = 0;
    for (int ok = 0; i < order.size() && ok < kWarmupTxops; ++i) {
      ok += order[i]->outcome == TxOutcome::Success;
    }
    std::size_t alternations = 0;
    std::size_t breaks = 0;
    std::size_t losses = 0;
    for (std::size_t k = i; k < order.size(); ++k) {
      losses += order[k]->outcome == TxOutcome::RtsLoss;
      if (k > i) {
        const bool alternates =
          order[k]->bss != order[k - 1]->bss && order[k]->start >= order[k - 1]->end;
        (alternates ? alternations : breaks)++;
      }
    }
    const std::string name(to_string(kind));
    v.require(breaks == 0, name + " alternation broken");
    v.require(losses == 0, name + " rts losses");
    v.require(alternations > 1000, name + " too few transmissions");
    v.detail << " " << name << ": txops=" << order.size() - i << " breaks=" << breaks
             << " rts_losses=" << losses << ";";
  }
  return v;
}

Verdict
iyt_round_robin()
{
  Verdict v;
  constexpr double kWarmupS = 1.0;
  constexpr int kSeeds = 5;
  for (int n = 2; n <= 9; ++n) {
    RunConfig c = base_config(ExperimentKind::Overlap, PolicyKind::Iyt, n);
    std::size_t in_order = 0;
    std::size_t pairs = 0;
    std::int64_t attempts = 0;
    std::int64_t losses = 0;
    double worst_s = 0.0;
    for (int seed = 0; seed < kSeeds; ++seed) {
      const auto t0 = std::chrono::steady_clock::now();
      const RunResult r = run_single(c, seed);
      worst_s = std::max(worst_s, seconds_since(t0));
      std::vector<BssId> ids;
      for (const auto& b : r.deployment.bsss) {
        ids.push_back(b.id);
      }
      std::sort(ids.begin(), ids.end());
      auto successor = [&](BssId id) {
        const auto it = std::find(ids.begin(), ids.end(), id);
        return std::next(it) == ids.end() ? ids.front() : *std::next(it);
      };
      const TxAttempt* prev = nullptr;
      for (const TxAttempt* a : by_start(r.attempts)) {
        if (to_seconds(a->start) < kWarmupS) {
          continue;
        }
        ++attempts;
        losses += a->outcome == TxOutcome::RtsLoss;
        if (a->outcome != TxOutcome::Success) {
          continue;
        }
        if (prev) {
          ++pairs;
          in_order += a->bss == successor(prev->bss);
        }
        prev = a;
      }
    }
    const double rr = 100.0 * static_cast<double>(in_order) / static_cast<double>(pairs);
    const double loss = 100.0 * static_cast<double>(losses) / static_cast<double>(attempts);
    v.require(rr >= 99.0, "N=" + std::to_string(n) + " order");
    v.require(loss < 1.0, "N=" + std::to_string(n) + " loss");
    v.require(worst_s < 10.0, "N=" + std::to_string(n) + " runtime");
    char buf[160];
    std::snprintf(buf, sizeof buf, " N=%d rr=%.2f%% loss=%.2f%% t=%.2fs;", n, rr, loss, worst_s);
    v.detail << buf;
  }
  return v;
}

Verdict
scalability()
{
  Verdict v;
  constexpr int kSeeds = 20;
  std::map<PolicyKind, std::map<int, std::vector<double>>> loss;
  std::map<PolicyKind, std::vector<double>> max_delay_ms;
  for (auto policy : {PolicyKind::Beb, PolicyKind::Db, PolicyKind::Iyt}) {
    for (int n = 2; n <= 9; ++n) {
      RunConfig c = base_config(ExperimentKind::Overlap, policy, n);
      c.experiment.n_sim = kSeeds;
      RunnerOptions opts;
      opts.write_runs = false;
      for (const auto& d : run_experiment(c, opts)) {
        loss[policy][n].push_back(d.summary.loss_pct.value_or(0.0));
        if (n == 9) {
          max_delay_ms[policy].push_back(d.summary.access_delay_ns->max * 1e-6);
        }
      }
    }
  }
  v.detail << " median BEB loss %:";
  double prev = -1.0;
  for (int n = 2; n <= 9; ++n) {
    const double m = median(loss[PolicyKind::Beb][n]);
    v.require(m >= prev, "BEB loss decreases at N=" + std::to_string(n));
    prev = m;
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.2f", m);
    v.detail << buf;
  }
  const double beb9 = median(loss[PolicyKind::Beb][9]);
  const double iyt9 = median(loss[PolicyKind::Iyt][9]);
  v.require(beb9 >= 5.0 * iyt9, "BEB/IYT loss ratio at N=9 below 5");
  // Worst case over all seeds and BSSs at N = 9.
  auto worst = [&](PolicyKind p) {
    return *std::max_element(max_delay_ms[p].begin(), max_delay_ms[p].end());
  };
  const double beb_d = worst(PolicyKind::Beb);
  const double db_d = worst(PolicyKind::Db);
  const double iyt_d = worst(PolicyKind::Iyt);
  v.require(beb_d >= 2.0 * std::max(db_d, iyt_d), "BEB max delay below 2x max(DB, IYT)");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "; N=9 median loss BEB=%.2f IYT=%.2f DB=%.2f; max delay ms BEB=%.1f DB=%.1f IYT=%.1f",
                beb9, iyt9, median(loss[PolicyKind::Db][9]), beb_d, db_d, iyt_d);
  v.detail << buf;
  return v;
}

Verdict
capture_dichotomy()
{
  Verdict v;
  for (auto kind : {ExperimentKind::ToyA, ExperimentKind::ToyB}) {
    const RunResult r = run_single(base_config(kind, PolicyKind::Beb, 2), 0);
    std::size_t overlapped = 0;
    std::size_t wrong = 0;
    for (const auto& a : r.attempts) {
      if (a.overlaps.empty()) {
        continue;
      }
      ++overlapped;
      const bool ok = a.outcome == TxOutcome::Success;
      wrong += kind == ExperimentKind::ToyA ? !ok : ok;
    }
    const std::string name(to_string(kind));
    v.require(overlapped > 0, name + " no simultaneous transmissions");
    v.require(wrong == 0, name + " outcome mismatch");
    v.detail << " " << name << ": simultaneous=" << overlapped << " mismatches=" << wrong << ";";
  }
  return v;
}

// Mean per-BSS throughput over 20 seeds of toy_a with per-BSS policies.
std::array<double, 2>
coexistence_throughput(PolicyKind first, PolicyKind second, int second_cw0)
{
  RunConfig c = base_config(ExperimentKind::ToyA, PolicyKind::Beb, 2);
  c.experiment.n_sim = 20;
  c.bss_policies = {PolicyOverride{BssId{1}, first, std::nullopt, std::nullopt, std::nullopt},
                    PolicyOverride{BssId{2}, second, second_cw0, std::nullopt, std::nullopt}};
  c = resolve_config(to_json(c));
  RunnerOptions opts;
  opts.write_runs = false;
  std::array<double, 2> sum{};
  const auto runs = run_experiment(c, opts);
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < 2; ++i) {
      sum[i] += r.summary.per_bss[i].throughput_bps.mean;
    }
  }
  return {sum[0] / static_cast<double>(runs.size()), sum[1] / static_cast<double>(runs.size())};
}

Verdict
coexistence()
{
  Verdict v;
  const auto beb_iyt = coexistence_throughput(PolicyKind::Beb, PolicyKind::Iyt, 16);
  const auto beb_iyt5 = coexistence_throughput(PolicyKind::Beb, PolicyKind::Iyt, 5);
  const auto beb_db = coexistence_throughput(PolicyKind::Beb, PolicyKind::Db, 16);
  const auto beb_beb = coexistence_throughput(PolicyKind::Beb, PolicyKind::Beb, 16);
  const double gap16 = (beb_iyt[0] - beb_iyt[1]) / beb_iyt[1];
  const double gap5 = std::abs(beb_iyt5[0] - beb_iyt5[1]) / beb_iyt5[1];
  const double baseline = 0.5 * (beb_beb[0] + beb_beb[1]);
  const double db_ratio = beb_db[0] / baseline;
  v.require(gap16 >= 0.20, "BEB-vs-IYT gap below 20%");
  v.require(gap5 < 0.15, "BEB-vs-IYT(CW0=5) gap not below 15%");
  v.require(db_ratio <= 0.95, "BEB-vs-DB not 5% below baseline");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                " gap(cw0=16)=%.1f%% gap(cw0=5)=%.1f%% BEB-vs-DB/baseline=%.3f", 100 * gap16,
                100 * gap5, db_ratio);
  v.detail << buf;
  return v;
}

// Independent closed-form saturation throughput of a lone BSS.
double
saturation_oracle(const Deployment& d, const RunConfig& c)
{
  const double dist = std::max(1.0, std::hypot(d.bsss[0].ap.x - d.bsss[0].sta.x,
                                               d.bsss[0].ap.y - d.bsss[0].sta.y));
  const auto& pl = c.path_loss;
  const double loss = pl.pl0_db + 10.0 * pl.exponent * std::log10(dist) + pl.shadow_db / 2.0 +
                      pl.obstacle_db / 2.0 * (dist / 10.0);
  const double snr = c.radio.tx_power_dbm - loss - c.radio.noise_dbm;
  double rate = 0.0;
  for (const auto& e : c.mcs) {
    if (snr >= e.min_snr_db) {
      rate = e.rate_bps;
    }
  }
  const double bits = c.txop.mpdu_bytes * 8.0;
  const double fixed_us = c.mac.phy_header_us + c.mac.sifs_us + c.mac.back_us;
  int k = 1;
  for (int m = 1; m <= c.txop.ampdu_max; ++m) {
    if (fixed_us + std::ceil(m * bits / rate * 1e9) / 1e3 <= c.txop.txop_max_us) {
      k = m;
    }
  }
  const double txop_us = c.mac.rts_us + c.mac.sifs_us + c.mac.cts_us + c.mac.sifs_us + fixed_us +
                         std::ceil(k * bits / rate * 1e9) / 1e3;
  const double mean_bo = (c.policy_params.cw0 - 1) / 2.0;
  const double cycle_us = c.mac.difs_us + mean_bo * c.mac.slot_us + txop_us;
  return k * bits / (cycle_us * 1e-6);
}

Verdict
single_bss_throughput()
{
  Verdict v;
  for (int seed = 0; seed < 5; ++seed) {
    const RunConfig c = base_config(ExperimentKind::Overlap, PolicyKind::Beb, 1);
    const RunResult r = run_single(c, seed);
    const double oracle = saturation_oracle(r.deployment, c);
    const double sim = r.summary.throughput_bps.mean;
    const double err = std::abs(sim - oracle) / oracle;
    v.require(err <= 0.01, "seed " + std::to_string(seed) + " outside 1%");
    char buf[120];
    std::snprintf(buf, sizeof buf, " sim=%.4g oracle=%.4g err=%.3f%%;", sim, oracle, 100 * err);
    v.detail << buf;
  }
  return v;
}

std::string
slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict
determinism()
{
  Verdict v;
  const auto root = std::filesystem::temp_directory_path() / "dcfsim_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::size_t compared = 0;
  for (auto kind : {ExperimentKind::ToyB, ExperimentKind::Overlap, ExperimentKind::Grid}) {
    const int n = kind == ExperimentKind::Grid ? 9 : kind == ExperimentKind::ToyB ? 2 : 4;
    RunConfig c = base_config(kind, PolicyKind::Iyt, n);
    c.experiment.n_sim = 3;
    c.experiment.horizon_s = 20.0;
    c.experiment.master_seed = 42;
    c.output_prefix = std::string(to_string(kind));
    std::vector<std::vector<std::filesystem::path>> outs;
    for (unsigned jobs : {1u, 1u, 3u}) {
      RunnerOptions o;
      o.out_dir = root / ("rep" + std::to_string(outs.size()));
      o.jobs = jobs;
      o.trace = true;
      o.dump_deployment = true;
      outs.push_back(run_and_export(c, o));
    }
    for (std::size_t i = 0; i < outs[0].size(); ++i) {
      for (std::size_t rep = 1; rep < outs.size(); ++rep) {
        ++compared;
        v.require(slurp(outs[0][i]) == slurp(outs[rep][i]),
                  outs[0][i].filename().string() + " differs");
      }
    }
  }
  std::filesystem::remove_all(root);
  v.detail << " files compared=" << compared;
  return v;
}

}  // namespace

int
main()
{
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
    {"P1 backoff formulas", backoff_formulas},
    {"P2 BEB draw uniformity", beb_uniformity},
    {"P3 BEB tie probability", beb_tie_probability},
    {"P4 DB alternation", db_alternation},
    {"P5 IYT round robin", iyt_round_robin},
    {"P6 scalability direction", scalability},
    {"P7 capture dichotomy", capture_dichotomy},
    {"P8 coexistence direction", coexistence},
    {"P9 single-BSS saturation throughput", single_bss_throughput},
    {"P10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " exception: " << e.what();
    }
    failed += !v.pass;
    std::printf("%s %s (%.1fs)%s\n", v.pass ? "PASS" : "FAIL", name, seconds_since(t0),
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
