#include "spraylab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "spraylab/error.hpp"
#include "spraylab/text.hpp"

namespace spraylab {

namespace {
constexpr double kTimeEps = 1e-9;

// Named rng sub-streams; routing is reserved so future stochastic routers
// cannot perturb mobility or traffic.
enum RngStream : std::uint32_t { kMobilityStream = 0, kTrafficStream = 1 };
} // namespace

double transfer_duration(long long size_bytes, double speed_bytes_per_s) {
    if (speed_bytes_per_s <= 0) throw ValidationError("transmit speed must be > 0");
    return static_cast<double>(size_bytes) / speed_bytes_per_s;
}

Simulation::Simulation(SimConfig config, ReportSinks sinks)
    : config_(std::move(config)),
      sinks_(std::move(sinks)),
      mobility_rng_(Rng::stream(config_.rng_seed, kMobilityStream)),
      traffic_rng_(Rng::stream(config_.rng_seed, kTrafficStream)) {
    if (config_.groups.empty()) throw ValidationError("scenario has no host groups");
    if (config_.end_time <= 0) throw ValidationError("end_time must be > 0");

    map_ = config_.map.map_file.empty()
               ? synth_grid(config_.map.grid_rows, config_.map.grid_cols, config_.map.grid_spacing)
               : load_map_file(config_.map.map_file);

    // Hosts, group by group, per-group 0-based indices.
    for (std::size_t g = 0; g < config_.groups.size(); ++g) {
        const GroupConfig& group = config_.groups[g];
        for (int i = 0; i < group.count; ++i) {
            names_.push_back(group.group_id + std::to_string(i));
            NodeState node;
            node.group = static_cast<int>(g);
            world_.nodes.push_back(std::move(node));
            movement_params_.push_back({group.movement, group.speed_min, group.speed_max,
                                        group.wait_min, group.wait_max});
            node_buffer_size_.push_back(group.buffer_size);
            node_ttl_.push_back(group.ttl);
        }
    }

    auto resolve_pool = [&](const std::vector<std::string>& group_ids) {
        std::vector<int> pool;
        for (int i = 0; i < static_cast<int>(world_.nodes.size()); ++i) {
            const std::string& gid = config_.groups[world_.nodes[i].group].group_id;
            if (group_ids.empty() ||
                std::find(group_ids.begin(), group_ids.end(), gid) != group_ids.end())
                pool.push_back(i);
        }
        return pool;
    };
    traffic_sources_ = resolve_pool(config_.traffic.source_groups);
    traffic_dests_ = resolve_pool(config_.traffic.dest_groups);
    if (config_.traffic.enabled) {
        if (traffic_sources_.empty() || traffic_dests_.empty())
            throw ValidationError("traffic pools resolve to no hosts");
        if (traffic_sources_.size() == 1 && traffic_dests_.size() == 1 &&
            traffic_sources_[0] == traffic_dests_[0])
            throw ValidationError("traffic pools allow only self-addressed messages");
        next_event_time_ = traffic_rng_.uniform(config_.traffic.interval_min,
                                                config_.traffic.interval_max);
    }

    place_nodes();
    initial_link_scan();
    schedule_sends();
}

void Simulation::place_nodes() {
    std::vector<int> index_in_group(config_.groups.size(), 0);
    for (std::size_t i = 0; i < world_.nodes.size(); ++i) {
        NodeState& node = world_.nodes[i];
        const GroupConfig& group = config_.groups[node.group];
        int k = index_in_group[node.group]++;
        if (!group.fixed_positions.empty()) {
            const auto& [x, y] = group.fixed_positions[k % group.fixed_positions.size()];
            node.movement = place_at({x, y});
        } else {
            int v = static_cast<int>(mobility_rng_.below(map_.vertex_count()));
            node.movement = place_at_vertex(map_, v);
        }
        node.pos = node.movement.position;
    }
}

void Simulation::emit_contact(double time, int a, int b, bool up) {
    if (!sinks_.contact) return;
    sinks_.contact({time, names_[a], names_[b], up});
}

void Simulation::initial_link_scan() {
    update_links();
}

bool Simulation::step() {
    if (finished_) throw std::logic_error("step() after finish()");
    double dt = config_.update_interval;
    if ((tick_ + 1) * dt > config_.end_time + kTimeEps) return false;
    ++tick_;
    world_.now = tick_ * dt;

    move_nodes(dt);
    update_links();
    complete_transfers();
    generate_traffic();
    schedule_sends();
    purge_expired();
    return true;
}

void Simulation::move_nodes(double dt) {
    for (std::size_t i = 0; i < world_.nodes.size(); ++i) {
        NodeState& node = world_.nodes[i];
        if (movement_params_[i].model == MovementModel::Stationary) continue;
        node.movement = next_position(node.movement, movement_params_[i], map_,
                                      world_.now - dt, dt, mobility_rng_);
        node.pos = node.movement.position;
    }
}

void Simulation::update_links() {
    const double range = config_.transmit_range;
    std::set<std::pair<int, int>> fresh;
    const int n = static_cast<int>(world_.nodes.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (distance(world_.nodes[a].pos, world_.nodes[b].pos) <= range)
                fresh.emplace(a, b);

    // Downs first: abort the in-flight transfers riding on them.
    for (const auto& link : world_.links) {
        if (fresh.count(link)) continue;
        for (auto it = world_.transfers.begin(); it != world_.transfers.end();) {
            bool on_link = (it->from == link.first && it->to == link.second) ||
                           (it->from == link.second && it->to == link.first);
            if (on_link) {
                world_.nodes[it->from].sending_msg = -1;
                ++world_.counters.aborted;
                it = world_.transfers.erase(it);
            } else {
                ++it;
            }
        }
        emit_contact(world_.now, link.first, link.second, false);
    }
    for (const auto& link : fresh)
        if (!world_.links.count(link))
            emit_contact(world_.now, link.first, link.second, true);
    world_.links = std::move(fresh);
}

bool Simulation::node_has_message(int node, int msg) const {
    return find_entry(node, msg) != nullptr;
}

bool Simulation::incoming_in_flight(int node, int msg) const {
    for (const auto& t : world_.transfers)
        if (t.to == node && t.msg == msg) return true;
    return false;
}

const BufferEntry* Simulation::find_entry(int node, int msg) const {
    for (const auto& e : world_.nodes[node].buffer)
        if (e.msg == msg) return &e;
    return nullptr;
}

BufferEntry* Simulation::find_entry(int node, int msg) {
    for (auto& e : world_.nodes[node].buffer)
        if (e.msg == msg) return &e;
    return nullptr;
}

void Simulation::insert_entry(int node, BufferEntry entry) {
    auto& buffer = world_.nodes[node].buffer;
    auto pos = std::find_if(buffer.begin(), buffer.end(), [&](const BufferEntry& e) {
        const Message& a = messages_[entry.msg];
        const Message& b = messages_[e.msg];
        return a.created_at < b.created_at ||
               (a.created_at == b.created_at && entry.msg < e.msg);
    });
    world_.nodes[node].buffer_used += messages_[entry.msg].size;
    buffer.insert(pos, std::move(entry));
}

void Simulation::drop_entry(int node, std::size_t index, double time) {
    auto& buffer = world_.nodes[node].buffer;
    world_.nodes[node].buffer_used -= messages_[buffer[index].msg].size;
    buffertimes_.push_back(time - buffer[index].received_at);
    ++world_.counters.dropped;
    buffer.erase(buffer.begin() + static_cast<std::ptrdiff_t>(index));
}

bool Simulation::make_room(int node, long long size, double time) {
    NodeState& state = world_.nodes[node];
    const double capacity = node_buffer_size_[node];
    if (static_cast<double>(size) > capacity) return false;
    while (static_cast<double>(state.buffer_used + size) > capacity) {
        // Oldest-received first; the entry being sent right now is protected.
        std::size_t victim = state.buffer.size();
        for (std::size_t i = 0; i < state.buffer.size(); ++i) {
            const BufferEntry& e = state.buffer[i];
            if (e.msg == state.sending_msg) continue;
            if (victim == state.buffer.size() ||
                e.received_at < state.buffer[victim].received_at ||
                (e.received_at == state.buffer[victim].received_at &&
                 e.msg < state.buffer[victim].msg))
                victim = i;
        }
        if (victim == state.buffer.size()) return false;
        drop_entry(node, victim, time);
    }
    return true;
}

void Simulation::complete_transfers() {
    // Stable order by completion time keeps tied completions in schedule order.
    std::vector<std::size_t> due;
    for (std::size_t i = 0; i < world_.transfers.size(); ++i)
        if (world_.transfers[i].completion <= world_.now + kTimeEps) due.push_back(i);
    std::stable_sort(due.begin(), due.end(), [&](std::size_t a, std::size_t b) {
        return world_.transfers[a].completion < world_.transfers[b].completion;
    });

    std::vector<Transfer> done;
    done.reserve(due.size());
    for (std::size_t i : due) done.push_back(world_.transfers[i]);
    std::vector<Transfer> remaining;
    for (std::size_t i = 0; i < world_.transfers.size(); ++i)
        if (std::find(due.begin(), due.end(), i) == due.end())
            remaining.push_back(world_.transfers[i]);
    world_.transfers = std::move(remaining);

    for (const Transfer& t : done) {
        world_.nodes[t.from].sending_msg = -1;
        BufferEntry* entry = find_entry(t.from, t.msg);
        if (!entry) {  // expired out of the giver's buffer mid-transfer
            ++world_.counters.aborted;
            continue;
        }
        const Message& msg = messages_[t.msg];
        if (t.delivery) {
            if (delivered_[t.msg]) {
                ++world_.counters.aborted;
                continue;
            }
            delivered_[t.msg] = true;
            ++world_.counters.delivered;
            ++world_.counters.relayed;
            DeliveryRecord rec;
            rec.time = t.completion;
            rec.id = msg.id;
            rec.size = msg.size;
            rec.latency = t.completion - msg.created_at;
            rec.from_host = names_[msg.source];
            rec.to_host = names_[msg.destination];
            rec.remaining_ttl = msg.ttl - rec.latency;
            for (int hop : entry->path) rec.path.push_back(names_[hop]);
            rec.path.push_back(names_[t.to]);
            rec.hopcount = static_cast<int>(rec.path.size()) - 1;
            deliveries_.push_back(rec);
            if (sinks_.delivery) sinks_.delivery(rec);
        } else {
            if (node_has_message(t.to, t.msg) || entry->copies < 2) {
                ++world_.counters.aborted;
                continue;
            }
            if (!make_room(t.to, msg.size, t.completion)) {
                ++world_.counters.aborted;
                continue;
            }
            CopySplit split = split_copies(entry->copies, config_.router.mode);
            entry->copies = split.keep;
            BufferEntry received;
            received.msg = t.msg;
            received.copies = copies_on_receive(config_.router, names_[t.to], split.give);
            received.received_at = t.completion;
            received.path = entry->path;
            received.path.push_back(t.to);
            insert_entry(t.to, std::move(received));
            ++world_.counters.relayed;
        }
    }
}

void Simulation::generate_traffic() {
    if (!config_.traffic.enabled) return;
    while (next_event_time_ <= world_.now + kTimeEps &&
           next_event_time_ <= config_.end_time + kTimeEps) {
        int src = traffic_sources_[traffic_rng_.below(traffic_sources_.size())];
        int dst = src;
        while (dst == src)
            dst = traffic_dests_[traffic_rng_.below(traffic_dests_.size())];
        long long size = traffic_rng_.uniform_int(
            static_cast<long long>(config_.traffic.size_min),
            static_cast<long long>(config_.traffic.size_max));

        Message msg;
        msg.id = "M" + std::to_string(next_message_seq_++);
        msg.source = src;
        msg.destination = dst;
        msg.size = size;
        msg.created_at = next_event_time_;
        msg.ttl = node_ttl_[src];
        int msg_idx = static_cast<int>(messages_.size());
        messages_.push_back(msg);
        delivered_.push_back(false);
        ++world_.counters.created;

        if (make_room(src, size, next_event_time_)) {
            BufferEntry entry;
            entry.msg = msg_idx;
            entry.copies = copies_on_create(config_.router, names_[src]);
            entry.received_at = next_event_time_;
            entry.path = {src};
            insert_entry(src, std::move(entry));
        } else {
            ++world_.counters.dropped;  // cannot even buffer its own message
        }

        next_event_time_ += traffic_rng_.uniform(config_.traffic.interval_min,
                                                 config_.traffic.interval_max);
    }
}

void Simulation::schedule_sends() {
    const int n = static_cast<int>(world_.nodes.size());
    std::vector<std::vector<int>> peers(n);
    for (const auto& [a, b] : world_.links) {
        peers[a].push_back(b);
        peers[b].push_back(a);
    }
    for (auto& p : peers) std::sort(p.begin(), p.end());

    for (int u = 0; u < n; ++u) {
        NodeState& node = world_.nodes[u];
        if (node.sending_msg != -1 || peers[u].empty()) continue;

        const BufferEntry* chosen = nullptr;
        int target = -1;
        bool delivery = false;
        // Pass 1: direct deliveries, oldest message first.
        for (const BufferEntry& e : node.buffer) {
            const Message& msg = messages_[e.msg];
            if (delivered_[e.msg]) continue;
            if (std::binary_search(peers[u].begin(), peers[u].end(), msg.destination) &&
                !incoming_in_flight(msg.destination, e.msg)) {
                chosen = &e;
                target = msg.destination;
                delivery = true;
                break;
            }
        }
        // Pass 2: sprays, oldest message first, smallest peer index first.
        if (!chosen) {
            for (const BufferEntry& e : node.buffer) {
                if (e.copies < 2) continue;  // wait phase
                const Message& msg = messages_[e.msg];
                for (int v : peers[u]) {
                    if (v == msg.destination) continue;  // delivery path only
                    if (node_has_message(v, e.msg) || incoming_in_flight(v, e.msg)) continue;
                    chosen = &e;
                    target = v;
                    delivery = false;
                    break;
                }
                if (chosen) break;
            }
        }
        if (!chosen) continue;

        Transfer t;
        t.from = u;
        t.to = target;
        t.msg = chosen->msg;
        t.completion = world_.now + transfer_duration(messages_[chosen->msg].size,
                                                      config_.transmit_speed);
        t.delivery = delivery;
        node.sending_msg = chosen->msg;
        world_.transfers.push_back(t);
        ++world_.counters.started;
    }
}

void Simulation::purge_expired() {
    for (int u = 0; u < static_cast<int>(world_.nodes.size()); ++u) {
        auto& buffer = world_.nodes[u].buffer;
        for (std::size_t i = buffer.size(); i > 0; --i) {
            const Message& msg = messages_[buffer[i - 1].msg];
            if (world_.now - msg.created_at > msg.ttl) drop_entry(u, i - 1, world_.now);
        }
    }
}

RunSummary Simulation::finish() {
    if (finished_) throw std::logic_error("finish() called twice");
    finished_ = true;

    for (const auto& t : world_.transfers) {
        world_.nodes[t.from].sending_msg = -1;
        ++world_.counters.aborted;
    }
    world_.transfers.clear();
    for (const auto& link : world_.links)
        emit_contact(config_.end_time, link.first, link.second, false);
    world_.links.clear();

    MessageStats stats = finalize_stats(world_.counters, deliveries_, buffertimes_);
    if (sinks_.stats) sinks_.stats(stats);
    return {world_.counters, stats};
}

long long Simulation::copies_in_custody(int msg) const {
    long long total = 0;
    for (const auto& node : world_.nodes)
        for (const auto& e : node.buffer)
            if (e.msg == msg) total += e.copies;
    return total;
}

RunSummary run(const SimConfig& config, ReportSinks sinks) {
    Simulation sim(config, std::move(sinks));
    while (sim.step()) {
    }
    return sim.finish();
}

RunReports run_to_reports(const SimConfig& config) {
    RunReports out;
    std::ostringstream conn, delv;
    ConnectivityWriter conn_writer(conn);
    DeliveredWriter delv_writer(delv);
    MessageStats stats;
    ReportSinks sinks;
    sinks.contact = [&](const ContactEvent& ev) { conn_writer.write(ev); };
    sinks.delivery = [&](const DeliveryRecord& rec) { delv_writer.write(rec); };
    sinks.stats = [&](const MessageStats& s) { stats = s; };
    out.summary = run(config, std::move(sinks));
    out.connectivity = conn.str();
    out.delivered = delv.str();
    out.stats_text = write_stats(stats);
    return out;
}

RunSummary run_to_files(const SimConfig& config, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto path_for = [&](const std::string& report) {
        return (fs::path(out_dir) / (config.name + "_" + report + ".txt")).string();
    };
    std::ofstream conn(path_for("ConnectivityDtnsim2Report"));
    std::ofstream delv(path_for("DeliveredMessagesReport"));
    std::ofstream stats_file(path_for("MessageStatsReport"));
    if (!conn || !delv || !stats_file)
        throw std::runtime_error("cannot open report files under " + out_dir);

    ConnectivityWriter conn_writer(conn);
    DeliveredWriter delv_writer(delv);
    ReportSinks sinks;
    sinks.contact = [&](const ContactEvent& ev) { conn_writer.write(ev); };
    sinks.delivery = [&](const DeliveryRecord& rec) { delv_writer.write(rec); };
    sinks.stats = [&](const MessageStats& s) { stats_file << write_stats(s); };
    RunSummary summary = run(config, std::move(sinks));
    conn.flush();
    delv.flush();
    stats_file.flush();
    if (!conn || !delv || !stats_file)
        throw std::runtime_error("report write failed under " + out_dir);
    return summary;
}

} // namespace spraylab
