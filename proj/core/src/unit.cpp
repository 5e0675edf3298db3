#include "ddrhc/unit.hpp"

#include <Eigen/Cholesky>

#include <algorithm>

namespace ddrhc {

PairSet SetsProvider::phi(int i, int tau) const {
  const auto out = out_set(i, tau);
  return pair_product(out, out);
}

PairSet SetsProvider::psi(int i, int tau) const {
  PairSet acc;
  for (int j : out_set(i, tau)) acc = pair_union(acc, phi(j, tau));
  return acc;
}

std::vector<int> RestrictedSets::in_set(int i, int tau) const {
  auto c = feasible_(i, tau);
  if (!std::binary_search(c.begin(), c.end(), i)) {
    c.push_back(i);  // self-communication is always feasible
    std::sort(c.begin(), c.end());
  }
  return sorted_intersection(t_->in_neighbors(i, tau), c);
}

std::vector<int> RestrictedSets::out_set(int i, int tau) const {
  auto c = feasible_(i, tau);
  if (!std::binary_search(c.begin(), c.end(), i)) {
    c.push_back(i);
    std::sort(c.begin(), c.end());
  }
  return sorted_intersection(t_->out_neighbors(i, tau), c);
}

size_t CostBlockStore::bytes() const {
  size_t b = 0;
  for (const auto& [key, m] : blocks) b += matrix_bytes(m);
  return b;
}

size_t SynthesisUnit::Knowledge::bytes() const {
  size_t b = 0;
  auto add_pair_map = [&b](const auto& outer) {
    for (const auto& [t, inner] : outer)
      for (const auto& [key, m] : inner) b += matrix_bytes(m);
  };
  add_pair_map(sqrt_qh);
  add_pair_map(R);
  add_pair_map(B);
  add_pair_map(A);
  add_pair_map(gain);
  for (const auto& [t, inner] : pcand)
    for (const auto& [key, cands] : inner)
      for (const auto& c : cands) b += matrix_bytes(c.value);
  return b;
}

void SynthesisUnit::Knowledge::evict_after(int t_max) {
  auto drop = [t_max](auto& outer) {
    for (auto it = outer.upper_bound(t_max); it != outer.end();) it = outer.erase(it);
  };
  drop(sqrt_qh);
  drop(R);
  drop(B);
  drop(A);
  drop(gain);
  drop(pcand);
}

SynthesisUnit::SynthesisUnit(int id, const AgentModel* model, const SetsProvider* sets,
                             WindowSpec w, BlockSelectionRule rule)
    : id_(id), model_(model), sets_(sets), w_(w), rule_(rule) {
  if (w.H < 1 || w.d < 1 || w.d > w.H)
    throw ValidationError("window spec must satisfy 1 <= d <= H");
  store_.owner = id;
  note_dims(id, model->state_dim, model->input_dim);
}

void SynthesisUnit::note_dims(int agent, int n, int m) {
  if (n > 0) state_dim_[agent] = n;
  if (m > 0) input_dim_[agent] = m;
}

int SynthesisUnit::require_dim(int agent) const {
  auto it = state_dim_.find(agent);
  if (it == state_dim_.end())
    throw SynthesisError("unit " + std::to_string(id_) + ": unknown state dimension of agent " +
                         std::to_string(agent));
  return it->second;
}

const Mat& SynthesisUnit::own_sqrt_qh(int p, int t) {
  auto& slot = own_sqrt_qh_[t];
  auto it = slot.find(p);
  if (it != slot.end()) return it->second;
  const auto din = sets_->in_set(id_, t);
  const Mat Q = model_->Q_for ? model_->Q_for(din, t) : model_->Q(t);
  const Mat H = model_->H_for ? model_->H_for(din, p, t) : model_->H(p, t);
  return slot.emplace(p, sqrt_psd(Q) * H).first->second;
}

const Mat* SynthesisUnit::lookup_sqrt_qh(int r, int p, int t) const {
  auto outer = know_.sqrt_qh.find(t);
  if (outer == know_.sqrt_qh.end()) return nullptr;
  auto it = outer->second.find({r, p});
  return it == outer->second.end() ? nullptr : &it->second;
}

Mat SynthesisUnit::require_sqrt_qh(int r, int p, int t, const char* stage) {
  if (r == id_) return own_sqrt_qh(p, t);
  const Mat* m = lookup_sqrt_qh(r, p, t);
  if (!m)
    throw SynthesisError("unit " + std::to_string(id_) + ": " + stage +
                         " is missing sqrt(Q)H payload (" + std::to_string(r) + "," +
                         std::to_string(p) + ") at t=" + std::to_string(t) +
                         " from neighbor " + std::to_string(r));
  return *m;
}

Mat SynthesisUnit::require_R(int owner, int t) const {
  if (owner == id_) return model_->R(t);
  auto outer = know_.R.find(t);
  if (outer != know_.R.end()) {
    auto it = outer->second.find(owner);
    if (it != outer->second.end()) return it->second;
  }
  throw SynthesisError("unit " + std::to_string(id_) + ": missing R of agent " +
                       std::to_string(owner) + " at t=" + std::to_string(t));
}

Mat SynthesisUnit::require_B(int owner, int t) const {
  if (owner == id_) return model_->B(t);
  auto outer = know_.B.find(t);
  if (outer != know_.B.end()) {
    auto it = outer->second.find(owner);
    if (it != outer->second.end()) return it->second;
  }
  throw SynthesisError("unit " + std::to_string(id_) + ": missing B of agent " +
                       std::to_string(owner) + " at t=" + std::to_string(t));
}

Mat SynthesisUnit::require_A(int owner, int t) const {
  if (owner == id_) return model_->A(t);
  auto outer = know_.A.find(t);
  if (outer != know_.A.end()) {
    auto it = outer->second.find(owner);
    if (it != outer->second.end()) return it->second;
  }
  throw SynthesisError("unit " + std::to_string(id_) + ": missing A of agent " +
                       std::to_string(owner) + " at t=" + std::to_string(t));
}

Mat SynthesisUnit::require_gain(int r, int p, int t) const {
  if (p == id_) {
    auto outer = gains_out_.find(t);
    if (outer != gains_out_.end()) {
      auto it = outer->second.find(r);
      if (it != outer->second.end()) return it->second;
    }
  } else {
    auto outer = know_.gain.find(t);
    if (outer != know_.gain.end()) {
      auto it = outer->second.find({r, p});
      if (it != outer->second.end()) return it->second;
    }
  }
  throw SynthesisError("unit " + std::to_string(id_) + ": missing gain K_{" + std::to_string(r) +
                       "," + std::to_string(p) + "} at t=" + std::to_string(t));
}

void SynthesisUnit::ingest(const Message& m) {
  if (m.to != id_) throw ValidationError("message delivered to the wrong unit");
  for (const auto& item : m.items) {
    switch (item.tag) {
      case ItemTag::kSqrtQH:
        know_.sqrt_qh[item.t][{item.a, item.b}] = item.value;
        note_dims(item.b, static_cast<int>(item.value.cols()));
        break;
      case ItemTag::kModelR:
        know_.R[item.t][item.a] = item.value;
        note_dims(item.a, -1, static_cast<int>(item.value.rows()));
        break;
      case ItemTag::kModelB:
        know_.B[item.t][item.a] = item.value;
        note_dims(item.a, static_cast<int>(item.value.rows()),
                  static_cast<int>(item.value.cols()));
        break;
      case ItemTag::kModelA:
        know_.A[item.t][item.a] = item.value;
        note_dims(item.a, static_cast<int>(item.value.rows()));
        break;
      case ItemTag::kGain:
        if (m.kind == MsgKind::kGainExport)
          actuation_in_[item.t][item.b] = item.value;  // K_{i,p}(t), column agent p = item.b
        else
          know_.gain[item.t][{item.a, item.b}] = item.value;
        note_dims(item.b, static_cast<int>(item.value.cols()));
        break;
      case ItemTag::kPBlock:
        know_.pcand[item.t][{item.a, item.b}].push_back({item.value, item.loss});
        note_dims(item.a, static_cast<int>(item.value.rows()));
        note_dims(item.b, static_cast<int>(item.value.cols()));
        break;
      case ItemTag::kStateVec:
        break;  // state transfers are consumed by the actuation loop, not here
    }
  }
}

void SynthesisUnit::compute(int r) {
  if (r < 2 || r > w_.H + 1)
    throw SchedulingError("unit compute called outside rounds [2, H+1]");
  const int tau_gain = w_.k + w_.H + 1 - r;
  if (tau_gain == w_.k + w_.H - 1)
    compute_terminal();
  else
    compute_propagation(tau_gain);
  compute_gain(tau_gain);
}

void SynthesisUnit::compute_terminal() {
  const int tH = w_.k + w_.H;
  const PairSet phi = sets_->phi(id_, tH - 1);
  CostBlockStore next;
  next.owner = id_;
  next.time = tH;
  for (const auto& [p, q] : phi) {
    const auto common = sorted_intersection(sets_->out_set(p, tH), sets_->out_set(q, tH));
    Mat block = Mat::Zero(require_dim(p), require_dim(q));
    for (int r : common) {
      const Mat Mp = require_sqrt_qh(r, p, tH, "terminal block assembly");
      const Mat Mq = require_sqrt_qh(r, q, tH, "terminal block assembly");
      block += Mp.transpose() * Mq;
    }
    next.blocks[{p, q}] = std::move(block);
    next.loss[{p, q}] = 0.0;
  }
  store_ = std::move(next);
}

void SynthesisUnit::compute_propagation(int tau_gain) {
  const int t = tau_gain + 1;       // model/gain/output time inside the update
  const int t_next = t + 1;         // time of the blocks being consumed
  const PairSet phi_new = sets_->phi(id_, tau_gain);
  const PairSet psi_mask = sets_->psi(id_, t);
  if (store_.time != t_next)
    throw SynthesisError("unit " + std::to_string(id_) + ": block store holds t=" +
                         std::to_string(store_.time) + ", expected t=" + std::to_string(t_next));

  // Candidate lookup for one pair key at t_next: own store plus received blocks.
  auto candidates_for = [&](const AgentPair& key) {
    std::vector<BlockCandidate> cands;
    auto own = store_.blocks.find(key);
    if (own != store_.blocks.end()) {
      if (rule_ == BlockSelectionRule::kPreferLocal)
        return std::vector<BlockCandidate>{{own->second, store_.loss.at(key)}};
      cands.push_back({own->second, store_.loss.at(key)});
    }
    auto outer = know_.pcand.find(t_next);
    if (outer != know_.pcand.end()) {
      auto it = outer->second.find(key);
      if (it != outer->second.end())
        cands.insert(cands.end(), it->second.begin(), it->second.end());
    }
    return cands;
  };

  struct PendingBlock {
    Mat value;
    double loss;
  };
  std::map<AgentPair, PendingBlock> fresh;

  for (const auto& [p, q] : phi_new) {
    if (p > q) continue;  // mirror below
    const auto dplus_p = sets_->out_set(p, t);
    const auto dplus_q = sets_->out_set(q, t);
    const auto common = sorted_intersection(dplus_p, dplus_q);
    const int np = require_dim(p), nq = require_dim(q);

    Mat acc = Mat::Zero(np, nq);
    for (int r : common) {
      const Mat Mp = require_sqrt_qh(r, p, t, "block propagation");
      const Mat Mq = (q == p) ? Mp : require_sqrt_qh(r, q, t, "block propagation");
      acc += Mp.transpose() * Mq;
      const Mat Krp = require_gain(r, p, t);
      const Mat Krq = (q == p) ? Krp : require_gain(r, q, t);
      acc += Krp.transpose() * require_R(r, t) * Krq;
    }

    // Stacked closed-loop factors W~ and the assembled neighbor-block matrix,
    // with pairs outside psi masked to zero.
    auto stack_dims = [&](const std::vector<int>& set) {
      std::vector<int> off(set.size() + 1, 0);
      for (size_t a = 0; a < set.size(); ++a) off[a + 1] = off[a] + require_dim(set[a]);
      return off;
    };
    const auto off_p = stack_dims(dplus_p);
    const auto off_q = stack_dims(dplus_q);

    // Stacked column of the closed-loop factors (A_s d_{sr} - B_r K_{r,s});
    // the update enters as W_p' P~ W_q, matching the summation form.
    auto w_factor = [&](int s, const std::vector<int>& dplus, const std::vector<int>& off) {
      Mat W = Mat::Zero(off.back(), require_dim(s));
      for (size_t a = 0; a < dplus.size(); ++a) {
        const int r = dplus[a];
        Mat blockW = -require_B(r, t) * require_gain(r, s, t);
        if (r == s) blockW += require_A(s, t);
        W.block(off[a], 0, blockW.rows(), blockW.cols()) = blockW;
      }
      return W;
    };
    const Mat Wp = w_factor(p, dplus_p, off_p);
    const Mat Wq = (q == p) ? Wp : w_factor(q, dplus_q, off_q);

    double loss = 0.0;
    Mat P_tilde = Mat::Zero(off_p.back(), off_q.back());
    for (size_t a = 0; a < dplus_p.size(); ++a) {
      for (size_t b = 0; b < dplus_q.size(); ++b) {
        const AgentPair key{dplus_p[a], dplus_q[b]};
        if (!pair_contains(psi_mask, key)) {
          loss += 1.0;  // Approximation: pairs outside psi enter as zero
          continue;
        }
        const auto cands = candidates_for(key);
        const auto chosen = select_block(cands);
        if (!chosen) {
          loss += 1.0;  // in psi but absent from every source: masked, loss counted
          continue;
        }
        P_tilde.block(off_p[a], off_q[b], require_dim(key.first), require_dim(key.second)) =
            chosen->value;
      }
    }
    if (p == q) P_tilde = psd_repair(0.5 * (P_tilde + P_tilde.transpose()));

    acc += Wp.transpose() * P_tilde * Wq;
    fresh[{p, q}] = PendingBlock{std::move(acc), loss};
  }

  CostBlockStore next;
  next.owner = id_;
  next.time = t;
  for (const auto& [p, q] : phi_new) {
    if (p < q) continue;
    if (p == q) {
      const auto& pb = fresh.at({p, q});
      next.blocks[{p, q}] = 0.5 * (pb.value + pb.value.transpose());
      next.loss[{p, q}] = pb.loss;
    } else {  // enforce the symmetry pairing P_{(q,p)} = P_{(p,q)}^T
      const auto& pb = fresh.at({q, p});
      next.blocks[{q, p}] = pb.value;
      next.blocks[{p, q}] = pb.value.transpose();
      next.loss[{q, p}] = pb.loss;
      next.loss[{p, q}] = pb.loss;
    }
  }
  store_ = std::move(next);
}

void SynthesisUnit::compute_gain(int tau_gain) {
  const int t = tau_gain + 1;
  if (store_.time != t)
    throw SynthesisError("unit " + std::to_string(id_) + ": block store out of phase");
  const auto dplus = sets_->out_set(id_, tau_gain);

  std::vector<int> off(dplus.size() + 1, 0);
  for (size_t a = 0; a < dplus.size(); ++a) {
    auto it = input_dim_.find(dplus[a]);
    if (it == input_dim_.end())
      throw SynthesisError("unit " + std::to_string(id_) + ": unknown input dimension of agent " +
                           std::to_string(dplus[a]));
    off[a + 1] = off[a] + it->second;
  }

  Mat S_tilde(off.back(), off.back());
  Mat P_tilde(off.back(), model_->state_dim);
  const Mat Ai = model_->A(tau_gain);
  for (size_t a = 0; a < dplus.size(); ++a) {
    const int p = dplus[a];
    const Mat Bp = require_B(p, tau_gain);
    for (size_t b = 0; b < dplus.size(); ++b) {
      const int q = dplus[b];
      const Mat Bq = require_B(q, tau_gain);
      Mat S_pq = Bp.transpose() * store_.blocks.at({p, q}) * Bq;
      if (p == q) S_pq += require_R(q, tau_gain);
      S_tilde.block(off[a], off[b], S_pq.rows(), S_pq.cols()) = S_pq;
    }
    P_tilde.block(off[a], 0, Bp.cols(), model_->state_dim) =
        Bp.transpose() * store_.blocks.at({p, id_}) * Ai;
  }

  Eigen::LDLT<Mat> ldlt(S_tilde);
  const Mat K_tilde = ldlt.solve(P_tilde);
  const double residual = (S_tilde * K_tilde - P_tilde).norm();
  const double scale = S_tilde.norm() * K_tilde.norm() + P_tilde.norm() + 1.0;
  if (ldlt.info() != Eigen::Success || !(residual <= 1e-8 * scale))
    throw SynthesisError("unit " + std::to_string(id_) +
                         ": stacked gain system is singular at tau=" + std::to_string(tau_gain));

  auto& out = gains_out_[tau_gain];
  for (size_t a = 0; a < dplus.size(); ++a)
    out[dplus[a]] = K_tilde.block(off[a], 0, off[a + 1] - off[a], model_->state_dim);
}

std::vector<Message> SynthesisUnit::round_messages(int r) {
  std::vector<Message> out;
  const int k = w_.k, H = w_.H;

  if (r == 0) {  // Step 2: terminal products to in-neighbors
    const int tH = k + H;
    const auto din = sets_->in_set(id_, tH);
    std::vector<PayloadItem> items;
    for (int p : din)
      items.push_back({ItemTag::kSqrtQH, tH, id_, p, own_sqrt_qh(p, tH), 0.0});
    for (int q : din) {
      if (q == id_) continue;
      Message m;
      m.from = id_;
      m.to = q;
      m.kind = MsgKind::kTerminalH;
      m.items = items;
      out.push_back(std::move(m));
    }
    return out;
  }

  if (r >= 1 && r <= H) {  // Step 4.1 for iteration tau_t
    const int tau_t = k + H - r;
    const int t1 = tau_t + 1;
    const auto din = sets_->in_set(id_, tau_t);
    if (din.size() <= 1) return out;

    std::vector<PayloadItem> items;
    items.push_back({ItemTag::kModelR, tau_t, id_, 0, model_->R(tau_t), 0.0});
    items.push_back({ItemTag::kModelB, tau_t, id_, 0, model_->B(tau_t), 0.0});
    for (int p : sets_->out_set(id_, t1))  // forward sqrt(Q)H products onto own state
      items.push_back({ItemTag::kSqrtQH, t1, p, id_, require_sqrt_qh(p, id_, t1, "forwarding"),
                       0.0});
    if (tau_t != k) {
      for (int p : din)
        items.push_back({ItemTag::kSqrtQH, tau_t, id_, p, own_sqrt_qh(p, tau_t), 0.0});
    }
    if (tau_t != k + H - 1) {
      for (int p : sets_->out_set(id_, t1)) {
        items.push_back({ItemTag::kModelR, t1, p, 0, require_R(p, t1), 0.0});
        items.push_back({ItemTag::kModelB, t1, p, 0, require_B(p, t1), 0.0});
      }
      items.push_back({ItemTag::kModelA, t1, id_, 0, model_->A(t1), 0.0});
      for (int p : sets_->out_set(id_, t1))
        items.push_back({ItemTag::kGain, t1, p, id_, require_gain(p, id_, t1), 0.0});
      for (const auto& [key, block] : store_.blocks)
        items.push_back(
            {ItemTag::kPBlock, store_.time, key.first, key.second, block, store_.loss.at(key)});
    }
    for (int q : din) {
      if (q == id_) continue;
      Message m;
      m.from = id_;
      m.to = q;
      m.kind = MsgKind::kStepData;
      m.items = items;
      out.push_back(std::move(m));
    }
    return out;
  }

  if (r == H + 1) {  // Step 5: export the first d gains to out-neighbors
    std::map<int, std::vector<PayloadItem>> per_receiver;
    for (int tau = k; tau < k + w_.d; ++tau) {
      auto it = gains_out_.find(tau);
      if (it == gains_out_.end())
        throw SynthesisError("unit " + std::to_string(id_) + ": gains for tau=" +
                             std::to_string(tau) + " were never computed");
      for (const auto& [p, K] : it->second) {
        if (p == id_) continue;
        per_receiver[p].push_back({ItemTag::kGain, tau, p, id_, K, 0.0});
      }
    }
    for (auto& [p, items] : per_receiver) {
      Message m;
      m.from = id_;
      m.to = p;
      m.kind = MsgKind::kGainExport;
      m.items = std::move(items);
      out.push_back(std::move(m));
    }
    return out;
  }

  throw SchedulingError("round " + std::to_string(r) + " is outside the window schedule");
}

void SynthesisUnit::end_of_round(int r) {
  size_t own_bytes = 0;
  for (const auto& [t, inner] : own_sqrt_qh_)
    for (const auto& [p, m] : inner) own_bytes += matrix_bytes(m);
  for (const auto& [t, inner] : gains_out_)
    for (const auto& [p, m] : inner) own_bytes += matrix_bytes(m);
  for (const auto& [t, inner] : actuation_in_)
    for (const auto& [p, m] : inner) own_bytes += matrix_bytes(m);
  peak_bytes_ = std::max(peak_bytes_, know_.bytes() + store_.bytes() + own_bytes);

  const int tau_gain = w_.k + w_.H + 1 - r;
  know_.evict_after(tau_gain + 1);
  for (auto it = own_sqrt_qh_.upper_bound(tau_gain + 1); it != own_sqrt_qh_.end();)
    it = own_sqrt_qh_.erase(it);
}

GainSchedule SynthesisUnit::actuation_gains() const {
  GainSchedule g(w_.k, w_.H, w_.d);
  for (int tau = w_.k; tau < w_.k + w_.d; ++tau) {
    auto own = gains_out_.find(tau);
    if (own != gains_out_.end()) {
      auto self = own->second.find(id_);
      if (self != own->second.end()) g.set(id_, id_, tau, self->second, id_);
    }
    auto in = actuation_in_.find(tau);
    if (in != actuation_in_.end())
      for (const auto& [p, K] : in->second) g.set(id_, p, tau, K, p);
  }
  return g;
}

}  // namespace ddrhc
