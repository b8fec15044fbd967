#pragma once

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

struct sqlite3;
struct sqlite3_stmt;

namespace arbohub::datastore::sql {

class SqliteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Value = std::variant<std::monostate, std::int64_t, double, std::string>;

class Statement {
public:
    Statement(sqlite3* db, const std::string& sql);
    Statement(Statement&& other) noexcept;
    Statement& operator=(Statement&&) = delete;
    Statement(const Statement&) = delete;
    ~Statement();

    Statement& bind(int index, const Value& value);  // 1-based
    Statement& bind_all(const std::vector<Value>& values);

    // Returns true while a row is available.
    bool step();
    void reset();

    std::int64_t column_int64(int col) const;
    double column_double(int col) const;
    std::string column_text(int col) const;
    bool column_is_null(int col) const;

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

class Connection {
public:
    explicit Connection(const std::filesystem::path& path);
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;
    ~Connection();

    void exec(const std::string& sql);
    Statement prepare(const std::string& sql) { return Statement(db_, sql); }
    std::int64_t last_insert_rowid() const;

private:
    sqlite3* db_ = nullptr;
};

// BEGIN on construction, ROLLBACK on destruction unless committed.
class Transaction {
public:
    enum class Mode { deferred, immediate };
    Transaction(Connection& conn, Mode mode);
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;
    ~Transaction();
    void commit();

private:
    Connection& conn_;
    bool done_ = false;
};

// Fixed-size set of connections to one database file in WAL mode, so each
// reader gets its own snapshot while a writer is active.
class ConnectionPool {
public:
    ConnectionPool(std::filesystem::path path, std::size_t size);

    class Lease {
    public:
        Lease(ConnectionPool& pool, std::unique_ptr<Connection> conn)
            : pool_(&pool), conn_(std::move(conn)) {}
        Lease(Lease&&) noexcept = default;
        Lease& operator=(Lease&&) = delete;
        ~Lease();
        Connection& operator*() const { return *conn_; }
        Connection* operator->() const { return conn_.get(); }

    private:
        ConnectionPool* pool_;
        std::unique_ptr<Connection> conn_;
    };

    Lease acquire();
    const std::filesystem::path& path() const { return path_; }

private:
    void release(std::unique_ptr<Connection> conn);

    std::filesystem::path path_;
    std::size_t capacity_;
    std::size_t opened_ = 0;
    std::vector<std::unique_ptr<Connection>> idle_;
    std::mutex mutex_;
    std::condition_variable available_;
};

}  // namespace arbohub::datastore::sql
