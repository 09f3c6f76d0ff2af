#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hybridcast/graph.hpp"

#include "json.hpp"

namespace hybridcast {

enum class Mode { Hybrid, Hybrid0 };
enum class Channel { Local, Global };

struct ModelConfig {
    Mode mode = Mode::Hybrid0;
    int global_send_cap = 0;   // 0 -> ceil(log2 n)
    int global_recv_cap = 0;   // 0 -> ceil(log2 n)
    int word_limit = 2;        // words per global payload
    bool strict = true;        // violations throw instead of dropping
    long long round_limit = 0; // 0 -> HYBRIDCAST_ROUND_LIMIT env or 10^7
};

struct Word {
    std::uint64_t value = 0;
    bool is_id = false;  // receiving an id-bearing word grows the knowledge set
};

struct Envelope {
    int src = -1;
    int dst = -1;
    Channel channel = Channel::Global;
    std::vector<Word> payload;
};

struct GlobalRecord {
    long long round = 0;  // round in which the message was sent
    int src = -1, dst = -1;
    std::vector<Word> payload;
};

struct Violation {
    std::string kind;  // send-cap | recv-cap | knowledge | payload | local-edge
    int node = -1;
    long long round = 0;
    std::string detail;
};

struct PhaseCount {
    std::string label;
    long long rounds = 0;
    bool oracle = false;  // cited-cost rounds, not simulated
};

struct Transcript {
    long long rounds = 0;
    std::vector<PhaseCount> phases;
    long long local_messages = 0;
    long long global_messages = 0;
    std::vector<Violation> violations;
    std::vector<GlobalRecord> global_log;
    // identifier pairs asserted by charged oracles (tree neighbors, cluster
    // rosters); recorded so offline replay can reconstruct knowledge sets
    std::vector<std::pair<int, int>> grants;

    long long simulated_rounds() const;
    long long oracle_rounds() const;
    long long phase_total(const std::string& label) const;
    nlohmann::json to_json(bool detail = false) const;
};

struct ProtocolViolation : std::runtime_error {
    Violation violation;
    explicit ProtocolViolation(Violation v)
        : std::runtime_error(v.kind + " violation at node " + std::to_string(v.node) +
                             ", round " + std::to_string(v.round) + ": " + v.detail),
          violation(std::move(v)) {}
};

// Synchronous round executor. The global channel is simulated envelope by
// envelope with budget and Hybrid_0 knowledge enforcement; the local channel
// (LOCAL model, unbounded bandwidth) is accounted in aggregate, with knowledge
// effects applied through learn()/flood helpers.
class Engine {
  public:
    Engine(const Graph& g, ModelConfig cfg);

    const Graph& graph() const { return g_; }
    const ModelConfig& config() const { return cfg_; }
    Transcript& transcript() { return tr_; }
    const Transcript& transcript() const { return tr_; }
    int send_cap() const { return send_cap_; }
    int recv_cap() const { return recv_cap_; }

    void begin_phase(const std::string& label);
    void end_phase();

    void send_global(int src, int dst, std::vector<Word> payload);
    void send_local(int src, int dst, std::vector<Word> payload);
    // Validates budgets, advances the clock, and returns the envelopes that
    // become visible next round, ordered by (channel, sender id, dst id).
    std::vector<Envelope> finish_round();

    // Queue of global envelopes delivered over as many rounds as caps require.
    // Queue order is preserved per sender; knowledge checks happen at the round
    // an envelope is actually sent. Returns rounds consumed.
    long long deliver_paced(std::vector<Envelope> queue,
                            const std::function<void(const Envelope&)>& on_delivery = {});

    void charge_oracle(const std::string& label, long long rounds);
    // Local-channel phases modeled in aggregate (flooding et al.).
    void charge_local_rounds(long long rounds, long long messages);

    bool knows(int node, int other) const;
    void learn(int node, int other);
    const std::set<int>& knowledge(int node) const;
    // Oracle-asserted mutual identifier exchange (e.g. virtual tree neighbors).
    void grant_mutual_knowledge(int a, int b);

  private:
    void deliver_words(const Envelope& e);
    void bump_round();

    const Graph& g_;
    ModelConfig cfg_;
    Transcript tr_;
    int send_cap_ = 0, recv_cap_ = 0;
    long long round_limit_ = 0;
    std::vector<Envelope> staged_;
    std::vector<std::set<int>> knowledge_;
    int open_phase_ = -1;  // index into tr_.phases, -1 when none open
};

// Per-node program execution. The step callback runs once per node per round
// with that node's inbox; state lives in the closure. Halted nodes are skipped.
struct NodeApi {
    Engine& engine;
    int self;
    bool& halted;
    void send_global(int dst, std::vector<Word> payload) { engine.send_global(self, dst, std::move(payload)); }
    void send_local(int dst, std::vector<Word> payload) { engine.send_local(self, dst, std::move(payload)); }
    void halt() { halted = true; }
};

using ProgramStep = std::function<void(NodeApi&, const std::vector<Envelope>&)>;

Transcript execute(const Graph& g, const ProgramStep& step, ModelConfig cfg);

// Item flooding over the local channel: after `rounds` rounds every node in
// scope knows every item initially held within its rounds-hop ball (paths
// restricted to scope when given). Consumes exactly `rounds` rounds.
std::vector<std::set<std::uint64_t>> flood(Engine& eng,
                                           std::vector<std::set<std::uint64_t>> items,
                                           int rounds,
                                           const std::vector<int>* scope = nullptr);

// Offline transcript replay: budget and knowledge findings, for the CLI
// validate subcommand and tamper tests.
std::vector<Violation> validate_transcript(const Graph& g, const nlohmann::json& transcript_json);

}  // namespace hybridcast
