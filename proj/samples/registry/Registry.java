import java.util.HashSet;
import java.util.LinkedHashSet;
import java.util.Set;

class Registry {
    private Set<String> active;
    private Set<String> retired;

    public Registry() {
        active = new LinkedHashSet<>();
        retired = new HashSet<>();
    }

    public void register(String key) {
        active.add(key);
    }

    public void retire(String key) {
        if (active.contains(key)) {
            active.remove(key);
            retired.add(key);
        } else {
        }
    }

    public void reset() {
        active.clear();
        retired.clear();
    }
}
