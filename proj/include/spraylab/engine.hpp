#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "spraylab/map_graph.hpp"
#include "spraylab/mobility.hpp"
#include "spraylab/reports.hpp"
#include "spraylab/rng.hpp"
#include "spraylab/routing.hpp"
#include "spraylab/settings.hpp"

namespace spraylab {

struct Message {
    std::string id;       // "M" + sequence number
    int source = -1;      // node index
    int destination = -1;
    long long size = 0;   // bytes
    double created_at = 0.0;
    double ttl = 0.0;     // seconds
};

/// A replica held by one node: budget, custody chain, residence start.
struct BufferEntry {
    int msg = -1;            // index into Simulation::messages()
    int copies = 1;
    double received_at = 0.0;
    std::vector<int> path;   // custodian chain, ends with the holding node
};

struct NodeState {
    int group = 0;
    Point pos;
    MovementState movement;
    std::vector<BufferEntry> buffer;  // sorted by (created_at, msg index)
    long long buffer_used = 0;        // bytes
    int sending_msg = -1;             // message index of the outgoing transfer, -1 if idle
};

struct Transfer {
    int from = -1, to = -1;
    int msg = -1;
    double completion = 0.0;
    bool delivery = false;  // destination transfer vs spray
};

struct WorldState {
    double now = 0.0;
    std::vector<NodeState> nodes;
    std::set<std::pair<int, int>> links;  // unordered pairs, first < second
    std::vector<Transfer> transfers;      // in-flight, schedule order
    RunCounters counters;
};

struct RunSummary {
    RunCounters counters;
    MessageStats stats;
};

/// Transfer completion offset: size / speed seconds.
double transfer_duration(long long size_bytes, double speed_bytes_per_s);

/// Single-run discrete-event simulation. One instance drives exactly one
/// run and owns its sinks; runs never share mutable state, so independent
/// instances may execute on separate threads.
///
/// Tick order: clock, movement, link recompute (downs abort transfers, ups
/// fire contacts), transfer completions, traffic, send scheduling, TTL
/// purge. Identical (config, seed) inputs give byte-identical reports.
class Simulation {
public:
    Simulation(SimConfig config, ReportSinks sinks);

    /// Advances one tick; false once the clock would pass end_time.
    bool step();

    /// Closes dangling contacts at end_time, emits stats, returns totals.
    RunSummary finish();

    double now() const { return world_.now; }
    const SimConfig& config() const { return config_; }
    const WorldState& world() const { return world_; }
    const std::vector<Message>& messages() const { return messages_; }
    const std::vector<std::string>& host_names() const { return names_; }
    const MapGraph& map() const { return map_; }
    bool is_delivered(int msg) const { return delivered_[msg]; }

    /// Total replica budget currently in custody for one message.
    long long copies_in_custody(int msg) const;

private:
    void place_nodes();
    void initial_link_scan();
    void move_nodes(double dt);
    void update_links();
    void complete_transfers();
    void generate_traffic();
    void schedule_sends();
    void purge_expired();

    bool node_has_message(int node, int msg) const;
    bool incoming_in_flight(int node, int msg) const;
    const BufferEntry* find_entry(int node, int msg) const;
    BufferEntry* find_entry(int node, int msg);
    void insert_entry(int node, BufferEntry entry);
    bool make_room(int node, long long size, double time);
    void drop_entry(int node, std::size_t index, double time);
    void emit_contact(double time, int a, int b, bool up);

    SimConfig config_;
    ReportSinks sinks_;
    MapGraph map_;
    Rng mobility_rng_;
    Rng traffic_rng_;

    std::vector<std::string> names_;
    std::vector<MovementParams> movement_params_;  // per node
    std::vector<double> node_buffer_size_;
    std::vector<double> node_ttl_;
    std::vector<int> traffic_sources_;
    std::vector<int> traffic_dests_;

    WorldState world_;
    std::vector<Message> messages_;
    std::vector<bool> delivered_;
    std::vector<DeliveryRecord> deliveries_;
    std::vector<double> buffertimes_;

    long long tick_ = 0;
    double next_event_time_ = 0.0;
    long long next_message_seq_ = 1;
    bool finished_ = false;
};

/// Runs a scenario to completion, streaming into the sinks.
RunSummary run(const SimConfig& config, ReportSinks sinks);

/// Full report texts of one run, for in-memory pipelines.
struct RunReports {
    std::string connectivity;
    std::string delivered;
    std::string stats_text;
    RunSummary summary;
};
RunReports run_to_reports(const SimConfig& config);

/// Writes `<name>_ConnectivityDtnsim2Report.txt`, `<name>_DeliveredMessagesReport.txt`
/// and `<name>_MessageStatsReport.txt` under out_dir.
RunSummary run_to_files(const SimConfig& config, const std::string& out_dir);

} // namespace spraylab
