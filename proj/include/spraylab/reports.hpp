#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace spraylab {

struct ContactEvent {
    double time = 0.0;
    std::string host1, host2;
    bool up = true;

    bool operator==(const ContactEvent&) const = default;
};

struct DeliveryRecord {
    double time = 0.0;          // delivery time
    std::string id;
    long long size = 0;
    int hopcount = 0;           // path.size() - 1
    double latency = 0.0;       // time - created_at
    std::string from_host, to_host;
    double remaining_ttl = 0.0; // ttl - latency
    std::vector<std::string> path;  // from_host ... to_host

    bool operator==(const DeliveryRecord&) const = default;
};

struct RunCounters {
    long long created = 0;
    long long started = 0;
    long long relayed = 0;    // completed transfers, deliveries included
    long long delivered = 0;  // distinct message ids delivered
    long long dropped = 0;    // buffer evictions + ttl expiries, per buffer entry
    long long aborted = 0;    // link breaks mid-transfer + refused completions
};

struct MessageStats {
    long long created = 0, started = 0, relayed = 0, aborted = 0, dropped = 0, delivered = 0;
    double delivery_prob = 0.0;
    double overhead_ratio = 0.0;
    double latency_avg = 0.0;
    double latency_med = 0.0;
    double hopcount_avg = 0.0;
    double buffertime_avg = 0.0;
    bool degenerate = false;  // delivered == 0, NaN ratios
};

/// One line of the ConnectivityDtnsim2Report: `<time> CONN <h1> <h2> <up|down>`
/// with the lexicographically smaller host name first.
std::string connectivity_line(const ContactEvent& ev);

/// One record of the DeliveredMessagesReport, space separated, path joined
/// with `->`, isResponse always `N`.
std::string delivered_line(const DeliveryRecord& rec);

extern const char* const kDeliveredHeader;

/// Streaming writer: enforces time ordering, flushes on destruction.
class ConnectivityWriter {
public:
    explicit ConnectivityWriter(std::ostream& out) : out_(out) {}
    void write(const ContactEvent& ev);

private:
    std::ostream& out_;
    double last_time_ = -1.0;
};

class DeliveredWriter {
public:
    explicit DeliveredWriter(std::ostream& out);
    void write(const DeliveryRecord& rec);

private:
    std::ostream& out_;
    double last_time_ = -1.0;
};

std::string write_connectivity(const std::vector<ContactEvent>& events);
std::string write_delivered(const std::vector<DeliveryRecord>& records);

/// Final metrics. Ratios follow ONE's definitions; delivered == 0 yields
/// NaN tokens for the per-delivery metrics and flags the run degenerate.
MessageStats finalize_stats(const RunCounters& counters,
                            const std::vector<DeliveryRecord>& deliveries,
                            const std::vector<double>& buffertimes);

/// MessageStatsReport text: `key: value` lines in fixed order, ratios with
/// 4 decimals.
std::string write_stats(const MessageStats& stats);

/// Streamed outputs of a simulation run. Unset callbacks are skipped.
struct ReportSinks {
    std::function<void(const ContactEvent&)> contact;
    std::function<void(const DeliveryRecord&)> delivery;
    std::function<void(const MessageStats&)> stats;
};

} // namespace spraylab
