#include "hybridcast/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "hybridcast/util.hpp"

namespace hybridcast {

long long Transcript::simulated_rounds() const {
    long long r = 0;
    for (const auto& p : phases)
        if (!p.oracle) r += p.rounds;
    return r;
}

long long Transcript::oracle_rounds() const {
    long long r = 0;
    for (const auto& p : phases)
        if (p.oracle) r += p.rounds;
    return r;
}

long long Transcript::phase_total(const std::string& label) const {
    long long r = 0;
    for (const auto& p : phases)
        if (p.label == label) r += p.rounds;
    return r;
}

nlohmann::json Transcript::to_json(bool detail) const {
    nlohmann::json j;
    j["rounds"] = rounds;
    j["phases"] = nlohmann::json::array();
    for (const auto& p : phases)
        j["phases"].push_back({{"label", p.label}, {"rounds", p.rounds}, {"oracle", p.oracle}});
    j["messages"] = {{"local", local_messages}, {"global", global_messages}};
    j["violations"] = nlohmann::json::array();
    for (const auto& v : violations)
        j["violations"].push_back(
            {{"kind", v.kind}, {"node", v.node}, {"round", v.round}, {"detail", v.detail}});
    if (detail) {
        j["grants"] = nlohmann::json::array();
        for (const auto& [a, b] : grants) j["grants"].push_back({a, b});
        j["global_log"] = nlohmann::json::array();
        for (const auto& r : global_log) {
            nlohmann::json words = nlohmann::json::array();
            for (const auto& w : r.payload) words.push_back({{"value", w.value}, {"is_id", w.is_id}});
            j["global_log"].push_back(
                {{"round", r.round}, {"src", r.src}, {"dst", r.dst}, {"payload", words}});
        }
    }
    return j;
}

namespace {

long long default_round_limit() {
    if (const char* env = std::getenv("HYBRIDCAST_ROUND_LIMIT")) {
        long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 10'000'000LL;
}

}  // namespace

Engine::Engine(const Graph& g, ModelConfig cfg) : g_(g), cfg_(cfg) {
    int log_cap = std::max(1, ceil_log2(static_cast<std::uint64_t>(g.n())));
    send_cap_ = cfg_.global_send_cap > 0 ? cfg_.global_send_cap : log_cap;
    recv_cap_ = cfg_.global_recv_cap > 0 ? cfg_.global_recv_cap : log_cap;
    round_limit_ = cfg_.round_limit > 0 ? cfg_.round_limit : default_round_limit();
    knowledge_.resize(g.n());
    for (int v = 0; v < g.n(); ++v) {
        knowledge_[v].insert(v);
        for (int u : g.adj[v]) knowledge_[v].insert(u);
    }
}

void Engine::begin_phase(const std::string& label) {
    tr_.phases.push_back({label, 0, false});
    open_phase_ = static_cast<int>(tr_.phases.size()) - 1;
}

void Engine::end_phase() { open_phase_ = -1; }

void Engine::bump_round() {
    ++tr_.rounds;
    if (tr_.rounds > round_limit_)
        throw std::runtime_error("round limit exceeded (" + std::to_string(round_limit_) + ")");
    if (open_phase_ >= 0) ++tr_.phases[open_phase_].rounds;
}

void Engine::send_global(int src, int dst, std::vector<Word> payload) {
    if (src < 0 || src >= g_.n() || dst < 0 || dst >= g_.n())
        throw std::out_of_range("send_global: node index out of range");
    Violation v{"", src, tr_.rounds + 1, ""};
    if (static_cast<int>(payload.size()) > cfg_.word_limit) {
        v.kind = "payload";
        v.detail = std::to_string(payload.size()) + " words exceeds limit " +
                   std::to_string(cfg_.word_limit);
    } else if (cfg_.mode == Mode::Hybrid0 && !knows(src, dst)) {
        v.kind = "knowledge";
        v.detail = "destination id " + std::to_string(g_.id_of(dst)) + " not in knowledge set";
    }
    if (!v.kind.empty()) {
        if (cfg_.strict) throw ProtocolViolation(v);
        tr_.violations.push_back(v);
        return;
    }
    staged_.push_back({src, dst, Channel::Global, std::move(payload)});
}

void Engine::send_local(int src, int dst, std::vector<Word> payload) {
    if (src < 0 || src >= g_.n() || dst < 0 || dst >= g_.n())
        throw std::out_of_range("send_local: node index out of range");
    if (!g_.has_edge(src, dst)) {
        Violation v{"local-edge", src, tr_.rounds + 1,
                    "no edge to node id " + std::to_string(g_.id_of(dst))};
        if (cfg_.strict) throw ProtocolViolation(v);
        tr_.violations.push_back(v);
        return;
    }
    staged_.push_back({src, dst, Channel::Local, std::move(payload)});
}

void Engine::deliver_words(const Envelope& e) {
    // Hybrid_0 knowledge grows exactly from id-bearing payload words, plus the
    // sender identifier implicit in any received global message.
    if (e.channel == Channel::Global) learn(e.dst, e.src);
    for (const auto& w : e.payload)
        if (w.is_id) learn(e.dst, static_cast<int>(g_.index_of(static_cast<NodeId>(w.value))));
}

std::vector<Envelope> Engine::finish_round() {
    std::vector<int> sends(g_.n(), 0), recvs(g_.n(), 0);
    for (const auto& e : staged_) {
        if (e.channel != Channel::Global) continue;
        ++sends[e.src];
        ++recvs[e.dst];
    }
    std::vector<Envelope> keep;
    keep.reserve(staged_.size());
    for (auto& e : staged_) {
        Violation v{"", e.src, tr_.rounds + 1, ""};
        if (e.channel == Channel::Global && sends[e.src] > send_cap_) {
            v.kind = "send-cap";
            v.detail = std::to_string(sends[e.src]) + " global sends exceed cap " +
                       std::to_string(send_cap_);
        } else if (e.channel == Channel::Global && recvs[e.dst] > recv_cap_) {
            v.kind = "recv-cap";
            v.node = e.dst;
            v.detail = std::to_string(recvs[e.dst]) + " global receipts exceed cap " +
                       std::to_string(recv_cap_);
        }
        if (!v.kind.empty()) {
            if (cfg_.strict) {
                staged_.clear();
                throw ProtocolViolation(v);
            }
            tr_.violations.push_back(v);
            continue;
        }
        keep.push_back(std::move(e));
    }
    staged_.clear();
    bump_round();
    std::sort(keep.begin(), keep.end(), [&](const Envelope& a, const Envelope& b) {
        if (a.channel != b.channel) return a.channel < b.channel;
        if (g_.id_of(a.src) != g_.id_of(b.src)) return g_.id_of(a.src) < g_.id_of(b.src);
        return g_.id_of(a.dst) < g_.id_of(b.dst);
    });
    for (const auto& e : keep) {
        if (e.channel == Channel::Global) {
            ++tr_.global_messages;
            tr_.global_log.push_back({tr_.rounds, e.src, e.dst, e.payload});
        } else {
            ++tr_.local_messages;
        }
        deliver_words(e);
    }
    return keep;
}

long long Engine::deliver_paced(std::vector<Envelope> queue,
                                const std::function<void(const Envelope&)>& on_delivery) {
    long long rounds_used = 0;
    std::size_t done = 0;
    while (done < queue.size()) {
        std::vector<int> sends(g_.n(), 0), recvs(g_.n(), 0);
        std::vector<char> sender_blocked(g_.n(), 0);
        std::vector<char> shipped(queue.size() - done, 0);
        bool any = false;
        for (std::size_t i = done; i < queue.size(); ++i) {
            const Envelope& e = queue[i];
            if (sender_blocked[e.src]) continue;  // preserve per-sender order
            if (sends[e.src] >= send_cap_ || recvs[e.dst] >= recv_cap_ ||
                (cfg_.mode == Mode::Hybrid0 && !knows(e.src, e.dst))) {
                sender_blocked[e.src] = 1;
                continue;
            }
            ++sends[e.src];
            ++recvs[e.dst];
            shipped[i - done] = 1;
            send_global(e.src, e.dst, e.payload);
            any = true;
        }
        if (!any)
            throw std::runtime_error("deliver_paced: no envelope schedulable (knowledge deadlock)");
        auto delivered = finish_round();
        ++rounds_used;
        if (on_delivery)
            for (const auto& e : delivered) on_delivery(e);
        // compact the queue, keeping unsent envelopes in order
        std::vector<Envelope> rest;
        rest.reserve(queue.size());
        for (std::size_t i = done; i < queue.size(); ++i)
            if (!shipped[i - done]) rest.push_back(std::move(queue[i]));
        queue = std::move(rest);
        done = 0;
    }
    return rounds_used;
}

void Engine::charge_oracle(const std::string& label, long long rounds) {
    tr_.phases.push_back({label, rounds, true});
    tr_.rounds += rounds;
}

void Engine::charge_local_rounds(long long rounds, long long messages) {
    for (long long i = 0; i < rounds; ++i) bump_round();
    tr_.local_messages += messages;
}

bool Engine::knows(int node, int other) const { return knowledge_[node].count(other) > 0; }

void Engine::learn(int node, int other) { knowledge_[node].insert(other); }

const std::set<int>& Engine::knowledge(int node) const { return knowledge_[node]; }

void Engine::grant_mutual_knowledge(int a, int b) {
    learn(a, b);
    learn(b, a);
    tr_.grants.emplace_back(a, b);
}

Transcript execute(const Graph& g, const ProgramStep& step, ModelConfig cfg) {
    Engine eng(g, cfg);
    eng.begin_phase("program");
    std::vector<char> halted(g.n(), 0);
    std::vector<std::vector<Envelope>> inbox(g.n());
    while (true) {
        bool all_halted_before = true;
        for (int v = 0; v < g.n(); ++v) {
            if (halted[v]) continue;
            all_halted_before = false;
            bool h = false;
            NodeApi api{eng, v, h};
            step(api, inbox[v]);
            if (h) halted[v] = 1;
        }
        if (all_halted_before) break;
        bool all_halted = std::all_of(halted.begin(), halted.end(), [](char c) { return c != 0; });
        auto delivered = eng.finish_round();
        // A program that halts everywhere in its first call without sending
        // anything runs in zero rounds: undo the bookkeeping for that round.
        if (all_halted && delivered.empty() && eng.transcript().rounds == 1 &&
            eng.transcript().local_messages == 0 && eng.transcript().global_messages == 0) {
            eng.transcript().rounds = 0;
            eng.transcript().phases.back().rounds = 0;
            break;
        }
        for (auto& box : inbox) box.clear();
        for (auto& e : delivered) inbox[e.dst].push_back(std::move(e));
        if (all_halted) break;
    }
    eng.end_phase();
    return eng.transcript();
}

std::vector<std::set<std::uint64_t>> flood(Engine& eng,
                                           std::vector<std::set<std::uint64_t>> items,
                                           int rounds,
                                           const std::vector<int>* scope) {
    const Graph& g = eng.graph();
    std::vector<char> in_scope(g.n(), scope == nullptr ? 1 : 0);
    if (scope)
        for (int v : *scope) in_scope[v] = 1;
    // fresh[v]: items v learned last round and still owes its neighbors
    std::vector<std::set<std::uint64_t>> fresh = items;
    for (int r = 0; r < rounds; ++r) {
        long long msgs = 0;
        std::vector<std::set<std::uint64_t>> incoming(g.n());
        for (int v = 0; v < g.n(); ++v) {
            if (!in_scope[v] || fresh[v].empty()) continue;
            for (int u : g.adj[v]) {
                if (!in_scope[u]) continue;
                msgs += static_cast<long long>(fresh[v].size());
                incoming[u].insert(fresh[v].begin(), fresh[v].end());
            }
        }
        for (int v = 0; v < g.n(); ++v) {
            fresh[v].clear();
            for (std::uint64_t it : incoming[v])
                if (items[v].insert(it).second) fresh[v].insert(it);
        }
        eng.charge_local_rounds(1, msgs);
    }
    return items;
}

std::vector<Violation> validate_transcript(const Graph& g, const nlohmann::json& tj) {
    std::vector<Violation> findings;
    if (!tj.contains("global_log")) return findings;
    int log_cap = std::max(1, ceil_log2(static_cast<std::uint64_t>(g.n())));
    std::vector<std::set<int>> know(g.n());
    for (int v = 0; v < g.n(); ++v) {
        know[v].insert(v);
        for (int u : g.adj[v]) know[v].insert(u);
    }
    // Oracle-granted pairs are applied up front: the log does not carry their
    // timing, so a send racing its own grant would go unflagged, but injected
    // sends to genuinely unknown ids are still caught.
    if (tj.contains("grants"))
        for (const auto& pr : tj["grants"]) {
            int a = pr[0].get<int>(), b = pr[1].get<int>();
            if (a >= 0 && a < g.n() && b >= 0 && b < g.n()) {
                know[a].insert(b);
                know[b].insert(a);
            }
        }
    // group records by round; the log is written in delivery order
    std::map<long long, std::vector<nlohmann::json>> by_round;
    for (const auto& rec : tj["global_log"]) by_round[rec["round"].get<long long>()].push_back(rec);
    for (const auto& [round, recs] : by_round) {
        std::map<int, int> sends, recvs;
        for (const auto& rec : recs) {
            int src = rec["src"].get<int>(), dst = rec["dst"].get<int>();
            if (src < 0 || src >= g.n() || dst < 0 || dst >= g.n()) {
                findings.push_back({"payload", src, round, "node index out of range"});
                continue;
            }
            if (rec["payload"].size() > 2)
                findings.push_back({"payload", src, round,
                                    std::to_string(rec["payload"].size()) + " words in payload"});
            if (know[src].count(dst) == 0)
                findings.push_back({"knowledge", src, round,
                                    "destination id " + std::to_string(g.id_of(dst)) +
                                        " not yet known to sender"});
            if (++sends[src] > log_cap)
                findings.push_back({"send-cap", src, round,
                                    std::to_string(sends[src]) + " sends exceed cap " +
                                        std::to_string(log_cap)});
            if (++recvs[dst] > log_cap)
                findings.push_back({"recv-cap", dst, round,
                                    std::to_string(recvs[dst]) + " receipts exceed cap " +
                                        std::to_string(log_cap)});
            know[dst].insert(src);
            for (const auto& w : rec["payload"])
                if (w["is_id"].get<bool>()) {
                    auto it = g.index.find(static_cast<NodeId>(w["value"].get<std::uint64_t>()));
                    if (it != g.index.end()) know[dst].insert(static_cast<int>(it->second));
                }
        }
    }
    return findings;
}

}  // namespace hybridcast
