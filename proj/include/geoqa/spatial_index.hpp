#pragma once

/// @file spatial_index.hpp
/// Static R-tree over bounding boxes, bulk loaded with sort-tile-recursive
/// packing. The generation workload is read-only after load, so there is
/// no insert/delete path; rebuilding per collection is the contract.

#include <cmath>
#include <cstdint>
#include <vector>

#include "geoqa/geometry.hpp"

namespace geoqa {

class SpatialIndex {
public:
    static constexpr std::size_t kNodeCapacity = 16;

    SpatialIndex() = default;

    /// Bulk load; boxes[i] is the bounding rectangle of item i.
    explicit SpatialIndex(const std::vector<Rect>& boxes) {
        entries_.resize(boxes.size());
        for (std::uint32_t i = 0; i < boxes.size(); ++i) entries_[i] = {boxes[i], i};
        if (!entries_.empty()) root_ = build(0, entries_.size());
    }

    [[nodiscard]] std::size_t size() const { return entries_.size(); }

    /// Item ids whose bounding box touches `query` (boundary inclusive).
    /// Order is unspecified; callers needing determinism sort the result.
    [[nodiscard]] std::vector<std::uint32_t> query(const Rect& query) const {
        std::vector<std::uint32_t> hits;
        if (entries_.empty()) return hits;
        std::vector<std::int32_t> stack{root_};
        while (!stack.empty()) {
            const Node& node = nodes_[std::size_t(stack.back())];
            stack.pop_back();
            if (!node.box.overlaps(query)) continue;
            if (node.leaf) {
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                    if (entries_[i].box.overlaps(query)) hits.push_back(entries_[i].id);
            } else {
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                    stack.push_back(std::int32_t(i));
            }
        }
        return hits;
    }

private:
    struct Entry {
        Rect box;
        std::uint32_t id = 0;
    };
    struct Node {
        Rect box;
        std::uint32_t first = 0;  // entry index (leaf) or child node index
        std::uint32_t count = 0;
        bool leaf = true;
    };

    // STR packing: sort the range by center x, cut into vertical slices,
    // sort each slice by center y, emit leaves of kNodeCapacity, then pack
    // the leaves the same way until one root remains.
    std::int32_t build(std::size_t lo, std::size_t hi) {
        const std::size_t n = hi - lo;
        const std::size_t leaf_count = (n + kNodeCapacity - 1) / kNodeCapacity;
        const std::size_t slices = std::size_t(std::ceil(std::sqrt(double(leaf_count))));

        auto center_x = [](const Entry& e) { return e.box.min_x + e.box.max_x; };
        auto center_y = [](const Entry& e) { return e.box.min_y + e.box.max_y; };

        std::sort(entries_.begin() + long(lo), entries_.begin() + long(hi),
                  [&](const Entry& a, const Entry& b) { return center_x(a) < center_x(b); });

        std::vector<std::int32_t> level;
        const std::size_t slice_size = (n + slices - 1) / slices;
        for (std::size_t s = lo; s < hi; s += slice_size) {
            const std::size_t send = std::min(s + slice_size, hi);
            std::sort(entries_.begin() + long(s), entries_.begin() + long(send),
                      [&](const Entry& a, const Entry& b) { return center_y(a) < center_y(b); });
            for (std::size_t f = s; f < send; f += kNodeCapacity) {
                Node node;
                node.leaf = true;
                node.first = std::uint32_t(f);
                node.count = std::uint32_t(std::min(f + kNodeCapacity, send) - f);
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                    node.box.extend(entries_[i].box);
                level.push_back(std::int32_t(nodes_.size()));
                nodes_.push_back(node);
            }
        }
        while (level.size() > 1) level = pack_level(level);
        return level.front();
    }

    std::vector<std::int32_t> pack_level(const std::vector<std::int32_t>& children) {
        // children of one parent must be contiguous in nodes_; re-emit them
        std::vector<Node> child_nodes;
        child_nodes.reserve(children.size());
        for (const std::int32_t c : children) child_nodes.push_back(nodes_[std::size_t(c)]);

        const std::size_t parent_count = (child_nodes.size() + kNodeCapacity - 1) / kNodeCapacity;
        const std::size_t slices = std::size_t(std::ceil(std::sqrt(double(parent_count))));
        auto cx = [](const Node& a) { return a.box.min_x + a.box.max_x; };
        auto cy = [](const Node& a) { return a.box.min_y + a.box.max_y; };
        std::sort(child_nodes.begin(), child_nodes.end(),
                  [&](const Node& a, const Node& b) { return cx(a) < cx(b); });

        std::vector<std::int32_t> parents;
        const std::size_t slice_size = (child_nodes.size() + slices - 1) / slices;
        for (std::size_t s = 0; s < child_nodes.size(); s += slice_size) {
            const std::size_t send = std::min(s + slice_size, child_nodes.size());
            std::sort(child_nodes.begin() + long(s), child_nodes.begin() + long(send),
                      [&](const Node& a, const Node& b) { return cy(a) < cy(b); });
            for (std::size_t f = s; f < send; f += kNodeCapacity) {
                Node parent;
                parent.leaf = false;
                parent.first = std::uint32_t(nodes_.size());
                parent.count = std::uint32_t(std::min(f + kNodeCapacity, send) - f);
                for (std::size_t i = f; i < f + parent.count; ++i) {
                    parent.box.extend(child_nodes[i].box);
                    nodes_.push_back(child_nodes[i]);
                }
                parents.push_back(std::int32_t(nodes_.size()));
                nodes_.push_back(parent);
            }
        }
        return parents;
    }

    std::vector<Entry> entries_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

}  // namespace geoqa
