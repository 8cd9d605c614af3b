import java.util.HashSet;
import java.util.Set;

class Drain {
    private Set<String> pending;

    public Drain() {
        pending = new HashSet<>();
    }

    public void offer(String item) {
        pending.add(item);
    }

    public void drain() {
        while (!pending.isEmpty()) {
            pending.clear();
        }
    }
}
