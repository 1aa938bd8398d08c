#include "ccfair/queue_network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccfair {

namespace {

void check_decision(const SlotDecision& decision, const SystemParams& params) {
  const size_t users = static_cast<size_t>(params.users);
  const size_t n = size_t{1} << params.users;
  if (decision.admissions.size() != users || decision.virtual_arrivals.size() != users ||
      decision.combine.size() != n)
    throw std::invalid_argument("slot decision: field sizes do not match K");
  for (double a : decision.admissions)
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("slot decision: admissions must be >= 0");
  for (double g : decision.virtual_arrivals)
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("slot decision: virtual arrivals must be >= 0");
  for (size_t mask = 1; mask < n; ++mask) {
    const double s = decision.combine[mask];
    if (!(s >= 0.0) || !std::isfinite(s) || s > params.fair.sigma_max + 1e-9)
      throw std::invalid_argument("slot decision: combine counts must be in [0, sigma_max]");
  }
  for (const SubsetRate& r : decision.rates) {
    if (r.mask == 0 || r.mask >= n) throw std::invalid_argument("slot decision: bad rate mask");
    if (!(r.bits_per_use >= 0.0) || !std::isfinite(r.bits_per_use))
      throw std::invalid_argument("slot decision: rates must be >= 0");
  }
}

}  // namespace

QueueState make_queue_state(int users) {
  QueueState state;
  state.user_files.assign(users, 0.0);
  state.codeword_bits.assign(size_t{1} << users, 0.0);
  state.virtual_files.assign(users, 0.0);
  return state;
}

SlotDecision make_slot_decision(int users) {
  SlotDecision d;
  d.admissions.assign(users, 0.0);
  d.virtual_arrivals.assign(users, 0.0);
  d.combine.assign(size_t{1} << users, 0.0);
  d.power_by_user.assign(users, 0.0);
  return d;
}

std::vector<double> routing_scores(const QueueState& state, const SystemParams& params) {
  const int users = params.users;
  const size_t n = size_t{1} << users;
  const double m = params.memory_fraction;
  const double f = params.file_size_bits;
  const double f2 = f * f;

  // Backlog sum over members of each set.
  std::vector<double> member_files(n, 0.0);
  for (int k = 0; k < users; ++k) member_files[size_t{1} << k] = state.user_files[k];
  subset_zeta_inplace(member_files, users);

  std::vector<double> scores(n, 0.0);
  if (m == 1.0) {
    // Fully cached: codewords carry no bits, so the threshold side is zero.
    for (size_t mask = 1; mask < n; ++mask) scores[mask] = member_files[mask];
    return scores;
  }
  if (m == 0.0) {
    // No caching: only whole-file unicast queues receive bits.
    for (size_t mask = 1; mask < n; ++mask) {
      double bits = 0.0;
      for (int k = 0; k < users; ++k)
        if (mask & (size_t{1} << k)) bits += f * state.codeword_bits[size_t{1} << k];
      scores[mask] = member_files[mask] - bits / f2;
    }
    return scores;
  }

  // codeword_bits(j, i) = m^(i-1) (1-m)^(j-i+1) F factors into a per-mask
  // zeta transform of (m/(1-m))^|I| Q_I scaled by (1-m)^(j+1) F / m.
  const double ratio = m / (1.0 - m);
  std::vector<double> ratio_pow(users + 1), scale_pow(users + 2);
  ratio_pow[0] = 1.0;
  for (int i = 1; i <= users; ++i) ratio_pow[i] = ratio_pow[i - 1] * ratio;
  scale_pow[0] = f / m;
  for (int j = 1; j <= users + 1; ++j) scale_pow[j] = scale_pow[j - 1] * (1.0 - m);

  std::vector<double> weighted(n, 0.0);
  for (size_t mask = 1; mask < n; ++mask)
    weighted[mask] = ratio_pow[subset_size(static_cast<SubsetId>(mask))] * state.codeword_bits[mask];
  subset_zeta_inplace(weighted, users);

  for (size_t mask = 1; mask < n; ++mask) {
    const int j = subset_size(static_cast<SubsetId>(mask));
    scores[mask] = member_files[mask] - scale_pow[j + 1] * weighted[mask] / f2;
  }
  return scores;
}

SlotOutcome apply_slot(QueueState& state, const SlotDecision& decision, const SystemParams& params) {
  validate(params);
  check_decision(decision, params);
  const int users = params.users;
  const size_t n = size_t{1} << users;
  if (state.user_files.size() != static_cast<size_t>(users) || state.codeword_bits.size() != n)
    throw std::invalid_argument("apply_slot: state does not match K");

  SlotOutcome outcome;

  // Combination pass. Requested counts are capped by the files actually
  // present; high-pressure sets get first pick.
  std::vector<SubsetId> active;
  for (size_t mask = 1; mask < n; ++mask)
    if (decision.combine[mask] > 0.0) active.push_back(static_cast<SubsetId>(mask));

  std::vector<double> arrivals(n, 0.0);
  bool any_arrivals = false;
  if (!active.empty()) {
    const std::vector<double> scores = routing_scores(state, params);
    std::stable_sort(active.begin(), active.end(), [&](SubsetId a, SubsetId b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return a < b;
    });

    // Cached per (K, m, F); simulation loops hit this every slot.
    struct BitsTable {
      int users = -1;
      double memory = -1.0, file = -1.0;
      std::vector<std::vector<double>> bits;
    };
    thread_local BitsTable cached;
    if (cached.users != users || cached.memory != params.memory_fraction ||
        cached.file != params.file_size_bits) {
      const CacheParams cache = params.cache();
      cached.users = users;
      cached.memory = params.memory_fraction;
      cached.file = params.file_size_bits;
      cached.bits.assign(users + 1, {});
      for (int j = 1; j <= users; ++j) {
        cached.bits[j].assign(j + 1, 0.0);
        for (int i = 1; i <= j; ++i) cached.bits[j][i] = codeword_bits(j, i, cache);
      }
    }
    const std::vector<std::vector<double>>& bits_table = cached.bits;

    for (SubsetId mask : active) {
      double avail = decision.combine[mask];
      for (int k = 0; k < users; ++k)
        if (mask & (SubsetId{1} << k)) avail = std::min(avail, state.user_files[k]);
      if (avail <= 0.0) continue;
      for (int k = 0; k < users; ++k)
        if (mask & (SubsetId{1} << k)) state.user_files[k] -= avail;
      outcome.combined.push_back({mask, avail});
      any_arrivals = true;
      const int j = subset_size(mask);
      for (SubsetId sub = mask;; sub = (sub - 1) & mask) {
        if (sub != 0) arrivals[sub] += bits_table[j][subset_size(sub)] * avail;
        if (sub == 0) break;
      }
    }
  }

  for (int k = 0; k < users; ++k) {
    state.user_files[k] = std::max(state.user_files[k], 0.0) + decision.admissions[k];
  }

  // Service against the pre-arrival backlog, then book the fresh codewords.
  for (const SubsetRate& r : decision.rates) {
    const double offered = params.slot_channel_uses * r.bits_per_use;
    const double served = std::min(state.codeword_bits[r.mask], offered);
    if (served > 0.0) {
      state.codeword_bits[r.mask] -= served;
      outcome.served_bits.push_back({r.mask, served});
    }
  }
  if (any_arrivals)
    for (size_t mask = 1; mask < n; ++mask) state.codeword_bits[mask] += arrivals[mask];

  for (int k = 0; k < users; ++k) {
    state.virtual_files[k] =
        std::max(state.virtual_files[k] - decision.admissions[k], 0.0) + decision.virtual_arrivals[k];
  }
  return outcome;
}

DeliveryLedger make_ledger(int users) {
  DeliveryLedger ledger;
  ledger.drained_bits.assign(users, 0.0);
  ledger.offered_bits.assign(users, 0.0);
  ledger.admitted_files.assign(users, 0.0);
  ledger.combined_files.assign(users, 0.0);
  return ledger;
}

void DeliveryLedger::record(const SlotOutcome& outcome, const SlotDecision& decision,
                            const SystemParams& params) {
  const int users = params.users;
  for (const SubsetAmount& s : outcome.served_bits)
    for (int k = 0; k < users; ++k)
      if (s.mask & (SubsetId{1} << k)) drained_bits[k] += s.value;
  for (const SubsetRate& r : decision.rates)
    for (int k = 0; k < users; ++k)
      if (r.mask & (SubsetId{1} << k)) offered_bits[k] += params.slot_channel_uses * r.bits_per_use;
  for (const SubsetAmount& c : outcome.combined)
    for (int k = 0; k < users; ++k)
      if (c.mask & (SubsetId{1} << k)) combined_files[k] += c.value;
  for (int k = 0; k < users; ++k) admitted_files[k] += decision.admissions[k];
  ++slots;
}

double DeliveryLedger::delivered_files(int user, const SystemParams& params) const {
  return drained_bits[user] / ((1.0 - params.memory_fraction) * params.file_size_bits);
}

}  // namespace ccfair
