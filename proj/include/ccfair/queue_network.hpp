#pragma once

#include <cstdint>
#include <vector>

#include "ccfair/bc_capacity.hpp"
#include "ccfair/params.hpp"

namespace ccfair {

// Three-tier backlog state. user_files holds admitted whole files, one slot
// entry per user; codeword_bits holds XOR bits per receiver subset (mask
// indexed, entry 0 unused); virtual_files are the admission-control counters.
struct QueueState {
  std::vector<double> user_files;     // S_k, files
  std::vector<double> codeword_bits;  // Q_I, bits, size 2^K
  std::vector<double> virtual_files;  // U_k, files
};

QueueState make_queue_state(int users);

struct SlotDecision {
  std::vector<double> admissions;        // a_k, files
  std::vector<double> virtual_arrivals;  // gamma_k, files
  std::vector<double> combine;           // sigma per mask, size 2^K
  std::vector<SubsetRate> rates;         // mu, bits per channel use (sparse)
  std::vector<double> power_by_user;     // diagnostic power split
};

SlotDecision make_slot_decision(int users);

struct SubsetAmount {
  SubsetId mask = 0;
  double value = 0.0;
};

struct SlotOutcome {
  std::vector<SubsetAmount> served_bits;  // bits actually drained per subset
  std::vector<SubsetAmount> combined;     // effective combinations per subset
};

// Queue pressure per demand set: sum of member user backlogs minus the
// bit-normalized codeword backlog the set would feed. Size 2^K, entry 0 zero.
std::vector<double> routing_scores(const QueueState& state, const SystemParams& params);

// One slot of queue evolution, in order: combine (capped by the files actually
// available, allocated greedily by descending routing score), admit, serve
// codeword queues against their pre-arrival backlog, then update the virtual
// queues. All queues stay nonnegative.
SlotOutcome apply_slot(QueueState& state, const SlotDecision& decision, const SystemParams& params);

struct DeliveryLedger {
  std::vector<double> drained_bits;    // per user, credited from every served subset containing it
  std::vector<double> offered_bits;    // per user, T_slot * mu counterpart
  std::vector<double> admitted_files;  // per user
  std::vector<double> combined_files;  // per user, effective combinations joined
  uint64_t slots = 0;

  void record(const SlotOutcome& outcome, const SlotDecision& decision, const SystemParams& params);
  double delivered_files(int user, const SystemParams& params) const;
};

DeliveryLedger make_ledger(int users);

}  // namespace ccfair
